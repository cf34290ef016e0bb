#include "wildtorus/temporal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wt {
namespace {

double f_exp(double t) { return (t > 0.0) ? std::exp(-1.0 / t) : 0.0; }
double f_exp_d1(double t) { return (t > 0.0) ? std::exp(-1.0 / t) / (t * t) : 0.0; }

// Unnormalized bump on (1/4, 3/4): exp(-1/(u(1-u))) with u = 2(s - 1/4).
double bump_raw(double s) {
    if (s <= 0.25 || s >= 0.75) return 0.0;
    double u = 2.0 * (s - 0.25);
    return std::exp(-1.0 / (u * (1.0 - u)));
}

// Cumulative Simpson table of bump_raw^2 over [1/4, 3/4] plus the
// normalization it induces. Values at nodes s_j = 1/4 + j/(2N), j = 0..N,
// scaled so the last entry is exactly 1 (this is the endpoint correction
// that makes h_kappa exactly periodic).
struct BumpTable {
    static constexpr int N = 16384; // even
    std::vector<double> cum;        // normalized cumulative of g^2
    double g_scale = 0.0;           // g = g_scale * bump_raw
    double correction = 0.0;        // |total_N - total_{N/2}| / total_N

    BumpTable() {
        auto total_with = [](int n) {
            double h = 0.5 / n;
            std::vector<double> c(static_cast<std::size_t>(n) + 1, 0.0);
            for (int j = 0; j + 2 <= n; j += 2) {
                double s0 = 0.25 + j * h;
                double q0 = bump_raw(s0), q1 = bump_raw(s0 + h), q2 = bump_raw(s0 + 2 * h);
                q0 *= q0;
                q1 *= q1;
                q2 *= q2;
                // Simpson over the pair, split at the midpoint by the
                // quadratic through (q0, q1, q2)
                c[j + 1] = c[j] + h / 12.0 * (5.0 * q0 + 8.0 * q1 - q2);
                c[j + 2] = c[j] + h / 3.0 * (q0 + 4.0 * q1 + q2);
            }
            return c;
        };
        cum = total_with(N);
        double total = cum.back();
        double total_half = total_with(N / 2).back();
        correction = std::abs(total - total_half) / total;
        g_scale = 1.0 / std::sqrt(total);
        for (double& v : cum) v /= total;
        cum.back() = 1.0;
    }

    // 4-point Lagrange interpolation of the normalized cumulative at s.
    double eval(double s) const {
        if (s <= 0.25) return 0.0;
        if (s >= 0.75) return 1.0;
        double x = (s - 0.25) * 2.0 * N; // in [0, N]
        int j0 = static_cast<int>(std::floor(x)) - 1;
        j0 = std::clamp(j0, 0, N - 3);
        double r = 0.0;
        for (int a = 0; a < 4; ++a) {
            double w = 1.0;
            for (int b = 0; b < 4; ++b)
                if (b != a) w *= (x - (j0 + b)) / static_cast<double>(a - b);
            r += w * cum[static_cast<std::size_t>(j0) + a];
        }
        return std::clamp(r, 0.0, 1.0);
    }
};

const BumpTable& bump_table() {
    static const BumpTable table;
    return table;
}

double frac(double t) {
    double f = t - std::floor(t);
    return (f == 1.0) ? 0.0 : f;
}

} // namespace

double smooth_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    double a = f_exp(t), b = f_exp(1.0 - t);
    return a / (a + b);
}

double smooth_step_d1(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    double a = f_exp(t), b = f_exp(1.0 - t);
    double ap = f_exp_d1(t), bp = f_exp_d1(1.0 - t);
    double den = a + b;
    return (ap * b + a * bp) / (den * den);
}

double temporal_bump(double s) { return bump_table().g_scale * bump_raw(s); }

double g_kappa(double kappa, double t) {
    if (kappa < 1.0) throw std::invalid_argument("g_kappa: kappa >= 1 required");
    return std::sqrt(kappa) * temporal_bump(kappa * frac(t));
}

double h_kappa(double kappa, double t) {
    if (kappa < 1.0) throw std::invalid_argument("h_kappa: kappa >= 1 required");
    double s = frac(t);
    // int_0^s g_kappa^2 = G2(kappa s) with G2 the cumulative of g^2
    return bump_table().eval(std::min(kappa * s, 0.75)) - s;
}

double h_endpoint_correction() { return bump_table().correction; }

TemporalProfiles temporal_profiles(double kappa, int nu, std::vector<double> times) {
    if (kappa < 1.0) throw std::invalid_argument("temporal_profiles: kappa >= 1 required");
    if (nu < 1) throw std::invalid_argument("temporal_profiles: nu >= 1 required");
    if (times.size() < 2) throw std::invalid_argument("temporal_profiles: need >= 2 nodes");
    double max_dt = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (times[i] <= times[i - 1])
            throw std::invalid_argument("temporal_profiles: times must be increasing");
        max_dt = std::max(max_dt, times[i] - times[i - 1]);
    }
    // burst width is 1/(2 kappa nu); require >= 16 nodes across it
    if (max_dt > 1.0 / (32.0 * kappa * nu))
        throw std::invalid_argument("temporal_profiles: time grid does not resolve the bursts");

    TemporalProfiles p;
    p.kappa = kappa;
    p.nu = nu;
    p.times = std::move(times);
    p.g.reserve(p.times.size());
    p.h.reserve(p.times.size());
    for (double t : p.times) {
        p.g.push_back(g_kappa(kappa, nu * t));
        p.h.push_back(h_kappa(kappa, nu * t));
    }
    return p;
}

double CutoffFamily::chi(int i, double t) const {
    double half = tau / 2.0;
    double up = (i == 0) ? 1.0 : smooth_step((t - (node(i) + half)) / half);
    double down = (i == n_sub - 1) ? 1.0 : smooth_step(((node(i + 1) - half) - t) / half);
    return up * down;
}

double CutoffFamily::chi_dt(int i, double t) const {
    double half = tau / 2.0;
    double up = 1.0, up_dt = 0.0;
    if (i != 0) {
        double x = (t - (node(i) + half)) / half;
        up = smooth_step(x);
        up_dt = smooth_step_d1(x) / half;
    }
    double down = 1.0, down_dt = 0.0;
    if (i != n_sub - 1) {
        double x = ((node(i + 1) - half) - t) / half;
        down = smooth_step(x);
        down_dt = -smooth_step_d1(x) / half;
    }
    return up_dt * down + up * down_dt;
}

double CutoffFamily::chi_sum(double t) const {
    double s = 0.0;
    for (int i = 0; i < n_sub; ++i) s += chi(i, t);
    return s;
}

CutoffFamily glue_cutoffs(double tau, double eps, std::vector<int> active) {
    if (tau <= 0.0 || eps <= 0.0)
        throw std::invalid_argument("glue_cutoffs: tau, eps must be positive");
    int n_sub = static_cast<int>(std::lround(std::pow(tau, -eps)));
    if (n_sub < 2) throw std::invalid_argument("glue_cutoffs: tau^{-eps} rounds below 2");
    if (tau > 0.5 / n_sub + 1e-12)
        throw std::invalid_argument("glue_cutoffs: tau too large for the subdivision");
    CutoffFamily fam;
    fam.tau = tau;
    fam.eps = eps;
    fam.n_sub = n_sub;
    fam.active = std::move(active);
    return fam;
}

double dist_to_complement(const std::vector<Interval>& I, double t) {
    double best = 0.0;
    for (const auto& iv : I) best = std::max(best, std::min(t - iv.a, iv.b - t));
    return std::max(best, 0.0);
}

double theta_cutoff(const std::vector<Interval>& I, double tau, double t) {
    if (tau <= 0.0) throw std::invalid_argument("theta_cutoff: tau must be positive");
    double dist = dist_to_complement(I, t);
    return smooth_step(2.0 * (dist / tau - 1.0));
}

} // namespace wt
