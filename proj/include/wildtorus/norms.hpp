// Grid L^p norms and mixed Lebesgue-Bochner space-time norms.
#pragma once

#include "wildtorus/field.hpp"
#include "wildtorus/timeseries.hpp"

#include <limits>

namespace wt {

constexpr double kInf = std::numeric_limits<double>::infinity();

// L^p norm over T^d of the pointwise Euclidean magnitude. p in [1, inf].
// Uniform-weight grid quadrature; O(n^-2) for p outside {2, inf} on smooth
// fields, spectrally accurate for p = 2.
double lp_norm(const Field& f, double p);

// ||a||_{C^1} proxy: grid max |a| + grid max |grad a| (spectral gradient).
double c1_norm(const Field& a);

// H^s Sobolev norm (spectral), s integer >= 0.
double sobolev_norm(const Field& f, int s);

// W^{1,q} norm: ||f||_q + ||grad f||_q.
double w1q_norm(const Field& f, double q);

// Trapezoidal-in-time mixed norm L^{p_t}(0,1; L^{q_x}).
// Rejects non-uniform time grids when p_t != inf.
double mixed_norm(const TimeSeriesField& s, double p_t, double q_x);

// Internal variant: trapezoid on arbitrary strictly-increasing times of
// precomputed spatial norms. Used for graded grids.
double time_lp(const std::vector<double>& times, const std::vector<double>& vals, double p_t);

} // namespace wt
