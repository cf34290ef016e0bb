// Time series of fields on [0,1] with local Lagrange interpolation.
//
// Time grids may be graded (non-uniform): dense near gluing seams and
// temporal bursts, coarse elsewhere. Interpolation uses the 4 nearest
// nodes, so accuracy follows the local spacing.
#pragma once

#include "wildtorus/field.hpp"

#include <vector>

namespace wt {

struct TimeSeriesField {
    std::vector<double> times;  // strictly increasing, in [0,1]
    std::vector<Field> frames;  // one per node, shared GridSpec

    bool empty() const { return times.empty(); }
    std::size_t size() const { return times.size(); }
    const GridSpec& grid() const { return frames.front().grid(); }

    void validate() const;
    bool uniform(double tol = 1e-12) const;

    // Cubic (4-point Lagrange) interpolation; clamped stencils at the ends.
    Field at(double t) const;
    // Time derivative of the interpolant.
    Field deriv_at(double t) const;

    // Index of the last node with times[i] <= t (0 if t below range).
    std::size_t locate(double t) const;
};

// Union of a coarse uniform grid and fine uniform windows, sorted, deduped.
// Windows are clipped to [0,1].
std::vector<double> graded_times(int coarse_nodes,
                                 const std::vector<std::pair<double, double>>& windows,
                                 double fine_dt);

// Lagrange weights for value (and first derivative) of the interpolation
// polynomial through nodes ts at point t.
void lagrange_weights(const double* ts, int m, double t, double* w_val, double* w_der);

} // namespace wt
