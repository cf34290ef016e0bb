// NSR (Navier-Stokes-Reynolds) iterates: a velocity/stress/pressure triple
// on a shared time grid with well-preparedness bookkeeping, plus the
// manufactured oracle state and the momentum-residual certifier.
#pragma once

#include "wildtorus/temporal.hpp"
#include "wildtorus/timeseries.hpp"

#include <string>

namespace wt {

// Momentum equation: d_t u - Delta u + div(u (x) u) + grad p = div R
// (Euler mode drops the Laplacian). R is symmetric and trace-free; u and R
// have zero spatial mean; div u = 0.
struct NSRState {
    GridSpec grid;
    bool viscous = true;
    TimeSeriesField u; // vector
    TimeSeriesField R; // symmetric trace-free tensor
    TimeSeriesField p; // scalar
    // Optional dense-output derivative of u on the same time grid (analytic
    // or integrator-supplied). Sharp tau-scale cutoffs make pure finite
    // differencing of u lossy; producers that know d_t u exactly store it.
    TimeSeriesField u_dt;
    // Well-preparedness: R(t) = 0 whenever dist(t, I^c) <= tau. tau = 0 means
    // no concentration established yet (I = [0,1], condition vacuous).
    std::vector<Interval> I = {{0.0, 1.0}};
    double tau = 0.0;
    std::vector<int> active; // subdivision nodes carrying stress (bookkeeping)
};

struct StateCheck {
    double div_u = 0.0;      // max_t ||div u||_inf / ||u||_inf
    double mean_u = 0.0;     // max_t |mean u| / ||u||_inf
    double mean_R = 0.0;
    double trace_R = 0.0;    // max_t max_x |tr R| / ||R||_inf
    double sym_R = 0.0;
    double zero_set = 0.0;   // max ||R(t)||_inf over {dist(t, I^c) <= tau}
    bool ok(double tol = 1e-8) const {
        return div_u <= tol && mean_u <= tol && mean_R <= tol && trace_R <= tol &&
               sym_R <= tol && zero_set == 0.0;
    }
};

StateCheck check_state(const NSRState& s);

// Smooth oracle iterate on the given time grid: u0 = zeta(t) V(x) with V a
// Taylor-Green-type two-mode field, p0 the associated Poisson pressure, and
// R0 the antidivergence of the Leray-projected momentum residual, so the NSR
// identity holds exactly in space (time dependence analytic).
NSRState manufactured_state(const GridSpec& g, const std::vector<double>& times,
                            bool viscous = true);

// Wraps an arbitrary smooth divergence-free zero-mean velocity series into an
// NSR iterate: R = antidiv(P momentum), p = -inv_laplacian(div div(u(x)u)).
// Time derivatives come from the series interpolant.
NSRState wrap_velocity(TimeSeriesField u, bool viscous = true);

// Relative L^2_{t,x} momentum residual, normalized by the largest term's
// L^2_{t,x} norm. d_t u comes from the stored dense-output derivative when
// present (and use_stored_derivative), otherwise from the 4-point Lagrange
// interpolant on the (possibly graded) series nodes.
double nsr_residual(const NSRState& s, bool use_stored_derivative = true);

// State directory: u_####.tfield / R_####.tfield / p_####.tfield per frame
// plus state.json {viscous, times, I, tau, active}.
void write_state(const std::string& dir, const NSRState& s);
NSRState read_state(const std::string& dir);

} // namespace wt
