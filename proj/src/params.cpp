#include "wildtorus/params.hpp"

#include <array>
#include <cmath>
#include <sstream>

namespace wt {
namespace {

double rat_d(const Rat& r) {
    return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

// Exact lambda-exponents of LHS * lambda^gamma for the three schedule
// inequalities LHS <= lambda^{-gamma}, with nu ~ lambda^gamma,
// sigma ~ lambda^{1/gamma}, kappa = lambda^{kappa_exp}, mu = lambda.
//  (1) nu kappa^{1/2} sigma^{-1} mu^{-1} mu^{(d-1)/2 - (d-1)/r}
//  (2) kappa^{1/2 - 1/p} mu^{(d-1)/2}
//  (3) kappa^{-1/2} sigma mu mu^{(d-1)/2 - (d-1)/q}
std::array<Rat, 3> exact_margins(int d, const Rat& p, const Rat& q, const Rat& gamma,
                                 const Rat& r, const Rat& kexp) {
    const Rat dm1(d - 1);
    const Rat half(1, 2);
    Rat inv_g = Rat(1) / gamma;
    Rat m1 = gamma + half * kexp - inv_g - 1 + half * dm1 - dm1 / r + gamma;
    Rat m2 = (half - Rat(1) / p) * kexp + half * dm1 + gamma;
    Rat m3 = -half * kexp + inv_g + 1 + half * dm1 - dm1 / q + gamma;
    return {m1, m2, m3};
}

const char* kIneqNames[3] = {"temporal (nu kappa^1/2 sigma^-1 mu^-1 ...)",
                             "L^p L^infty (kappa^{1/2-1/p} mu^{(d-1)/2})",
                             "L^1 W^{1,q} (kappa^-1/2 sigma mu ...)"};

} // namespace

std::string to_string(const Rat& r) {
    std::ostringstream os;
    os << r.numerator();
    if (r.denominator() != 1) os << "/" << r.denominator();
    return os.str();
}

bool ParamSet::feasible() const {
    for (const auto& m : margins) {
        if (m.exact ? (m.exponent_margin > Rat(0)) : (m.log10_margin > 0.0)) return false;
    }
    return true;
}

std::string ParamSet::schedule() const {
    std::ostringstream os;
    if (mode == ParamMode::paper) {
        os << "mode = paper (exact schedule in lambda)\n"
           << "d = " << d << ", p = " << to_string(p) << ", q = " << to_string(q) << "\n"
           << "gamma = " << to_string(gamma) << "\n"
           << "r = " << to_string(r) << "\n"
           << "nu = ceil(lambda^(" << to_string(gamma) << "))\n"
           << "sigma = ceil(lambda^(" << to_string(Rat(1) / gamma) << "))\n"
           << "kappa = lambda^(" << to_string(kappa_exp) << ")\n"
           << "mu = lambda\n"
           << "lambda = " << lambda << "\n";
    } else {
        os << "mode = desk\n"
           << "d = " << d << ", r = " << r_num << "\n"
           << "nu = " << nu << ", sigma = " << sigma << ", kappa = " << kappa
           << ", mu = lambda = " << mu << "\n";
    }
    for (const auto& m : margins) {
        os << "margin[" << m.name << "] = ";
        if (m.exact)
            os << to_string(m.exponent_margin) << " (lambda-exponent)";
        else
            os << m.log10_margin << " (log10)";
        os << (((m.exact ? m.exponent_margin > Rat(0) : m.log10_margin > 0.0)) ? "  VIOLATED"
                                                                               : "  ok")
           << "\n";
    }
    return os.str();
}

ParamSet choose_params(int d, const Rat& p, const Rat& q, double eps, double lambda) {
    if (d != 2 && d != 3) throw std::invalid_argument("choose_params: d must be 2 or 3");
    if (!(p > Rat(1) && p < Rat(2))) throw std::invalid_argument("choose_params: need 1 < p < 2");
    if (!(q > Rat(0))) throw std::invalid_argument("choose_params: need q > 0");

    ParamSet ps;
    ps.mode = ParamMode::paper;
    ps.d = d;
    ps.p = p;
    ps.q = q;
    ps.eps = eps;
    ps.lambda = lambda;

    Rat gap = Rat(1) / p - Rat(1, 2);
    Rat inv_q = Rat(1) / q;
    Rat m = gap < inv_q ? gap : inv_q;
    ps.gamma = m / Rat(10 * d);
    ps.r = Rat(d) / (Rat(d) - ps.gamma);
    ps.kappa_exp = Rat(2) / ps.gamma + Rat(d + 1) - Rat(6) * ps.gamma;

    auto em = exact_margins(d, p, q, ps.gamma, ps.r, ps.kappa_exp);
    for (int i = 0; i < 3; ++i) {
        ScheduleMargin sm;
        sm.name = kIneqNames[static_cast<std::size_t>(i)];
        sm.exponent_margin = em[static_cast<std::size_t>(i)];
        sm.exact = true;
        sm.log10_margin = rat_d(em[static_cast<std::size_t>(i)]) * std::log10(lambda);
        ps.margins.push_back(std::move(sm));
        if (em[static_cast<std::size_t>(i)] > Rat(0))
            throw InfeasibleParams(std::string("choose_params(paper): violated inequality ") +
                                   kIneqNames[static_cast<std::size_t>(i)]);
    }

    // numeric mirrors; sigma and kappa usually overflow to inf in this mode
    double g = rat_d(ps.gamma);
    ps.nu = std::ceil(std::pow(lambda, g));
    ps.sigma = std::ceil(std::pow(lambda, 1.0 / g));
    ps.kappa = std::pow(lambda, rat_d(ps.kappa_exp));
    ps.mu = lambda;
    ps.r_num = rat_d(ps.r);
    return ps;
}

ParamSet choose_params(int d, double p, double q, double eps, const DeskInput& in, int n,
                       bool require_feasible) {
    if (d != 2 && d != 3) throw std::invalid_argument("choose_params: d must be 2 or 3");
    if (!(p > 1.0 && p < 2.0)) throw std::invalid_argument("choose_params: need 1 < p < 2");
    if (!(q > 0.0)) throw std::invalid_argument("choose_params: need q > 0");
    if (in.nu < 1 || in.sigma < 1)
        throw std::invalid_argument("choose_params: nu and sigma must be positive integers");
    if (!(in.kappa >= 1.0) || !(in.mu > 0.0) || !(in.r > 1.0))
        throw std::invalid_argument("choose_params: need kappa >= 1, mu > 0, r > 1");

    ParamSet ps;
    ps.mode = ParamMode::desk;
    ps.d = d;
    ps.p = Rat(static_cast<long long>(std::llround(p * 1e6)), 1000000);
    ps.q = Rat(static_cast<long long>(std::llround(q * 1e6)), 1000000);
    ps.eps = eps;
    ps.nu = static_cast<double>(in.nu);
    ps.sigma = static_cast<double>(in.sigma);
    ps.kappa = in.kappa;
    ps.mu = in.mu;
    ps.lambda = in.mu; // schedule sets mu = lambda
    ps.r_num = in.r;

    if (n > 0 && ps.sigma * ps.mu > n / 8.0)
        throw InfeasibleParams("choose_params(desk): grid does not resolve the building blocks "
                               "(need sigma * mu <= n/8)");

    // evaluate each LHS against the schedule target lambda^{-gamma} ~ 1/nu
    const double dm1 = d - 1;
    double lhs[3] = {
        ps.nu * std::sqrt(ps.kappa) / (ps.sigma * ps.mu) * std::pow(ps.mu, dm1 / 2 - dm1 / in.r),
        std::pow(ps.kappa, 0.5 - 1.0 / p) * std::pow(ps.mu, dm1 / 2),
        ps.sigma * ps.mu / std::sqrt(ps.kappa) * std::pow(ps.mu, dm1 / 2 - dm1 / q),
    };
    for (int i = 0; i < 3; ++i) {
        ScheduleMargin sm;
        sm.name = kIneqNames[static_cast<std::size_t>(i)];
        sm.log10_margin = std::log10(lhs[static_cast<std::size_t>(i)] * ps.nu);
        ps.margins.push_back(sm);
        if (require_feasible && sm.log10_margin > 0.0)
            throw InfeasibleParams(std::string("choose_params(desk): violated inequality ") +
                                   kIneqNames[static_cast<std::size_t>(i)]);
    }
    return ps;
}

} // namespace wt
