#include "wildtorus/harness.hpp"

#include "wildtorus/norms.hpp"
#include "wildtorus/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace wt {
namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double l1lr(const TimeSeriesField& s, double r) {
    std::vector<double> vals(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) vals[i] = lp_norm(s.frames[i], r);
    return time_lp(s.times, vals, 1.0);
}

// Every interval of `inner` lies inside some interval of `outer` (up to tol).
bool nested(const std::vector<Interval>& inner, const std::vector<Interval>& outer, double tol) {
    for (const Interval& in : inner) {
        bool ok = false;
        for (const Interval& out : outer)
            if (in.a >= out.a - tol && in.b <= out.b + tol) {
                ok = true;
                break;
            }
        if (!ok) return false;
    }
    return true;
}

// Merged, sorted stress cores {t : dist(t, I^c) > tau}, clipped to [0,1].
std::vector<Interval> stress_cores(const std::vector<Interval>& I, double tau) {
    std::vector<Interval> cores;
    for (const Interval& iv : I) {
        double a = std::max(iv.a + tau, 0.0);
        double b = std::min(iv.b - tau, 1.0);
        if (b > a) cores.push_back({a, b});
    }
    std::sort(cores.begin(), cores.end(), [](const Interval& x, const Interval& y) { return x.a < y.a; });
    std::vector<Interval> merged;
    for (const Interval& iv : cores) {
        if (!merged.empty() && iv.a <= merged.back().b) {
            merged.back().b = std::max(merged.back().b, iv.b);
        } else {
            merged.push_back(iv);
        }
    }
    return merged;
}

// Largest tau with node spacing + new half-window inside the old collar:
// 1/n_sub + 5 tau / 2 <= tau_prev with tau = n_sub^{-1/eps}. Returning
// n_sub^{-1/eps} makes subdivide() reproduce n_sub exactly.
double auto_tau(double tau_prev, double eps) {
    for (int n_sub = 2; n_sub <= 1 << 20; ++n_sub) {
        double tau = std::pow(static_cast<double>(n_sub), -1.0 / eps);
        if (1.0 / n_sub + 2.5 * tau <= tau_prev && tau < tau_prev / 2.0) return tau;
    }
    throw IterateError("iterate: no admissible tau below tau_prev");
}

// Integral of nodal data over [t[i0], t[i1]] by piecewise cubic (4-point
// Lagrange) interpolation, 2-point Gauss per subinterval. Falls back to
// trapezoid when fewer than 4 nodes are available.
double integrate_nodal(const std::vector<double>& t, const std::vector<double>& f,
                       std::size_t i0, std::size_t i1) {
    const std::size_t m = i1 - i0 + 1;
    if (m < 2) return 0.0;
    if (m < 4) {
        double s = 0.0;
        for (std::size_t i = i0; i < i1; ++i)
            s += 0.5 * (f[i] + f[i + 1]) * (t[i + 1] - t[i]);
        return s;
    }
    double total = 0.0;
    for (std::size_t i = i0; i < i1; ++i) {
        std::size_t j0 = i == i0 ? i0 : (i + 2 > i1 ? i1 - 3 : i - 1);
        double half = 0.5 * (t[i + 1] - t[i]);
        double mid = 0.5 * (t[i + 1] + t[i]);
        for (double x : {mid - half / std::sqrt(3.0), mid + half / std::sqrt(3.0)}) {
            double wv[4], wd[4];
            lagrange_weights(t.data() + j0, 4, x, wv, wd);
            double v = 0.0;
            for (int k = 0; k < 4; ++k) v += wv[k] * f[j0 + static_cast<std::size_t>(k)];
            total += half * v;
        }
    }
    return total;
}

} // namespace

std::string IterationReport::csv() const {
    std::ostringstream os;
    os << "# wild-torus v1\n";
    os << "n,delta,r_l1lr,w_l2l2,w_lplinf,w_l1w1q,residual,intervals,tau,box_proxy\n";
    for (const IterationRow& r : rows) {
        os << r.n << ',' << fmt(r.delta) << ',' << fmt(r.r_l1lr) << ',' << fmt(r.w_l2l2) << ','
           << fmt(r.w_lplinf) << ',' << fmt(r.w_l1w1q) << ',' << fmt(r.residual) << ','
           << r.intervals << ',' << fmt(r.tau) << ',' << fmt(r.box_proxy) << '\n';
    }
    return os.str();
}

NSRState iterate(const NSRState& initial, const IterateConfig& cfg, IterationReport* report) {
    if (cfg.n_steps < 0) throw std::invalid_argument("iterate: n_steps must be >= 0");
    if (cfg.stages.empty()) throw std::invalid_argument("iterate: need at least one stage");

    IterationReport local;
    IterationReport& rep = report ? *report : local;
    rep.eps = cfg.eps;
    rep.rows.clear();

    NSRState state = initial;
    const DeskInput& first = cfg.stages.front();
    rep.r0_l1lr = l1lr(state.R, first.r);
    double r_prev = rep.r0_l1lr;
    double tau_prev = state.tau;
    std::vector<Interval> I_prev = state.I;

    for (int n = 1; n <= cfg.n_steps; ++n) {
        const DeskInput& desk =
            cfg.stages[std::min<std::size_t>(static_cast<std::size_t>(n - 1), cfg.stages.size() - 1)];
        ParamSet ps = choose_params(state.grid.d, cfg.p, cfg.q, cfg.eps, desk, state.grid.n);

        double tau_req;
        if (static_cast<std::size_t>(n) <= cfg.tau_schedule.size())
            tau_req = cfg.tau_schedule[static_cast<std::size_t>(n - 1)];
        else if (n == 1)
            tau_req = cfg.tau0;
        else
            tau_req = auto_tau(tau_prev, cfg.eps);
        GlueOptions gopt = cfg.glue;
        gopt.r = desk.r;
        // Seam sampling obeys the same stencil-safety rule as the
        // perturbation's edge windows: derivative stencils at protected
        // times span three local spacings and must stay inside the
        // {dist <= 3 tau / 2} stress-free margin, so spacing <= tau / 6.
        gopt.fine_dt_factor = std::max(gopt.fine_dt_factor, 8.0);
        GlueReport grep;
        NSRState glued = glue(state, tau_req, cfg.eps, gopt, &grep);

        if (tau_prev > 0.0 && !(glued.tau < tau_prev / 2.0))
            throw IterateError("iterate: tau halving violated at step " + std::to_string(n));
        if (!nested(glued.I, I_prev, 1e-12))
            throw IterateError("iterate: interval nesting violated at step " + std::to_string(n));
        int count = static_cast<int>(glued.I.size());
        double budget = std::pow(glued.tau, -cfg.eps);
        if (static_cast<double>(count) > budget + 1e-9)
            throw IterateError("iterate: interval budget exceeded at step " + std::to_string(n));

        PerturbReport prep;
        NSRState next = perturb(glued, ps, cfg.perturb, &prep);

        IterationRow row;
        row.n = n;
        row.delta = std::pow(2.0, -n) * std::min(r_prev, cfg.eps);
        row.r_l1lr = prep.r1_l1lr;
        row.w_l2l2 = prep.wp_l2l2;
        row.w_lplinf = prep.wp_lplinf;
        row.w_l1w1q = prep.wp_l1w1q;
        row.residual = prep.residual;
        row.intervals = count;
        row.tau = glued.tau;
        row.box_proxy =
            count > 0 ? std::log(static_cast<double>(count)) / std::log(1.0 / (5.0 * glued.tau)) : 0.0;
        rep.rows.push_back(row);

        r_prev = row.r_l1lr;
        tau_prev = glued.tau;
        I_prev = glued.I;
        state = std::move(next);
    }
    return state;
}

std::string SingularReport::csv() const {
    std::ostringstream os;
    os << "# wild-torus v1\n";
    os << "n,count,tau,proxy,budget,within_budget\n";
    for (const SingularRow& r : rows) {
        os << r.n << ',' << r.count << ',' << fmt(r.tau) << ',' << fmt(r.proxy) << ','
           << fmt(r.budget) << ',' << (r.within_budget ? 1 : 0) << '\n';
    }
    return os.str();
}

SingularReport singular_report(const IterationReport& rep) {
    if (rep.rows.empty()) throw std::invalid_argument("singular_report: empty iteration report");
    SingularReport out;
    for (const IterationRow& r : rep.rows) {
        SingularRow s;
        s.n = r.n;
        s.count = r.intervals;
        s.tau = r.tau;
        s.proxy = r.box_proxy;
        s.budget = std::pow(r.tau, -rep.eps);
        s.within_budget = static_cast<double>(s.count) <= s.budget + 1e-9;
        out.rows.push_back(s);
    }
    out.proxy_final = out.rows.back().proxy;
    return out;
}

std::string EnergyProfile::csv() const {
    std::ostringstream os;
    os << "# wild-torus v1\n";
    os << "t,kinetic\n";
    for (std::size_t i = 0; i < times.size(); ++i)
        os << fmt(times[i]) << ',' << fmt(kinetic[i]) << '\n';
    return os.str();
}

EnergyProfile energy_profile(const NSRState& s) {
    EnergyProfile out;
    const std::size_t m = s.u.size();
    out.times = s.u.times;
    out.kinetic.resize(m);
    std::vector<double> dissipation(m, 0.0);
    double emax = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double l2 = lp_norm(s.u.frames[i], 2.0);
        out.kinetic[i] = 0.5 * l2 * l2;
        emax = std::max(emax, out.kinetic[i]);
        if (s.viscous) {
            double g = lp_norm(gradient(s.u.frames[i]), 2.0);
            dissipation[i] = g * g;
        }
    }
    if (emax == 0.0) return out;

    // Regularity windows: complement of the stress cores. R = 0 exactly
    // wherever dist(t, I^c) <= tau. Without concentration metadata
    // (tau = 0) the whole interval qualifies only if R vanishes outright.
    std::vector<Interval> cores;
    if (s.tau > 0.0) {
        cores = stress_cores(s.I, s.tau);
    } else {
        double rmax = 0.0;
        for (const Field& f : s.R.frames) rmax = std::max(rmax, f.max_abs());
        if (rmax > 0.0) return out;
    }
    std::vector<Interval> windows;
    double cursor = 0.0;
    for (const Interval& c : cores) {
        if (c.a > cursor) windows.push_back({cursor, c.a});
        cursor = std::max(cursor, c.b);
    }
    if (cursor < 1.0) windows.push_back({cursor, 1.0});

    for (const Interval& w : windows) {
        // restrict to the state's nodes inside the window
        std::size_t i0 = m, i1 = 0;
        for (std::size_t i = 0; i < m; ++i)
            if (out.times[i] >= w.a - 1e-12 && out.times[i] <= w.b + 1e-12) {
                i0 = std::min(i0, i);
                i1 = std::max(i1, i);
            }
        if (i0 >= i1) continue;
        double diss = integrate_nodal(out.times, dissipation, i0, i1);
        EnergyWindow ew;
        ew.t0 = out.times[i0];
        ew.t1 = out.times[i1];
        ew.defect = std::abs(out.kinetic[i1] + diss - out.kinetic[i0]) / emax;
        out.windows.push_back(ew);
    }

    for (const Interval& c : cores) {
        // energy swing across the stress window: last node before vs first after
        std::size_t before = m, after = m;
        for (std::size_t i = 0; i < m; ++i) {
            if (out.times[i] <= c.a + 1e-12) before = i;
            if (after == m && out.times[i] >= c.b - 1e-12) after = i;
        }
        if (before < m && after < m)
            out.jumps.push_back(std::abs(out.kinetic[after] - out.kinetic[before]));
    }
    return out;
}

} // namespace wt
