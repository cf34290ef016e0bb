// Intermittent time profiles and temporal cutoff families: the burst
// profile g_kappa (one burst per unit period, unit L^2 mass), its corrector
// primitive h_kappa(t) = int_0^t (g_kappa^2 - 1), the gluing cutoffs chi_i,
// and the support cutoff theta.
#pragma once

#include <vector>

namespace wt {

// C^inf monotone step: exactly 0 for t <= 0, exactly 1 for t >= 1.
double smooth_step(double t);
double smooth_step_d1(double t);

// Base bump g in C_c^inf((1/4, 3/4)) normalized so that int_0^1 g^2 = 1.
double temporal_bump(double s);

// 1-periodic extension of kappa^{1/2} g(kappa t): one burst per unit period,
// supported on frac(t) in (1/(4 kappa), 3/(4 kappa)). Requires kappa >= 1.
double g_kappa(double kappa, double t);

// h_kappa(t) = int_0^t (g_kappa^2(s) - 1) ds, 1-periodic with h(0) = h(1) = 0
// and |h| <= 1 pointwise. Satisfies d/dt [nu^{-1} h_kappa(nu t)] =
// g_kappa^2(nu t) - 1 for integer nu.
double h_kappa(double kappa, double t);

// Residual of the bump-normalization quadrature (how far the cumulative
// Simpson table is from its refined-by-2 version); the table itself is
// endpoint-corrected so h_kappa(1) = 0 exactly.
double h_endpoint_correction();

struct TemporalProfiles {
    double kappa = 0.0;
    int nu = 1;
    std::vector<double> times;
    std::vector<double> g; // g_kappa(nu t)
    std::vector<double> h; // h_kappa(nu t)
};

// Samples g_kappa(nu t), h_kappa(nu t) on `times`. Requires kappa >= 1,
// nu >= 1, and the grid to resolve the bursts: adjacent spacing at most
// 1/(32 kappa nu) (>= 16 nodes per burst of width 1/(2 kappa nu)).
TemporalProfiles temporal_profiles(double kappa, int nu, std::vector<double> times);

// Gluing cutoffs on the uniform partition t_i = i / n_sub of [0,1].
// Interior i: chi_i = 1 on [t_i + tau, t_{i+1} - tau], 0 outside
// (t_i + tau/2, t_{i+1} - tau/2). First/last intervals are one-sided, so no
// cut is made near t = 0 and t = 1.
struct CutoffFamily {
    double tau = 0.0;
    double eps = 0.0;
    int n_sub = 0;
    std::vector<int> active; // indices with a nonzero corrector (bookkeeping)

    double node(int i) const { return static_cast<double>(i) / n_sub; }
    double chi(int i, double t) const;
    double chi_dt(int i, double t) const;
    double chi_sum(double t) const;
};

// Builds the family with n_sub = round(tau^{-eps}) subintervals. Requires
// n_sub >= 2 and tau <= 1/(2 n_sub) (ramps must fit inside a subinterval).
CutoffFamily glue_cutoffs(double tau, double eps, std::vector<int> active = {});

struct Interval {
    double a = 0.0;
    double b = 0.0;
};

// dist(t, complement of I) where I is a finite union of closed intervals;
// zero when t lies outside every interval.
double dist_to_complement(const std::vector<Interval>& I, double t);

// Support cutoff: theta = 0 where dist(t, I^c) <= tau and theta = 1 where
// dist(t, I^c) >= 3 tau / 2, smooth ramp in between.
double theta_cutoff(const std::vector<Interval>& I, double tau, double t);

} // namespace wt
