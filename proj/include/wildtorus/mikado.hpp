// Concentrated stationary pipe flows along rational directions on T^d:
// W_k = psi_k e_k with potential phi_k (Delta phi_k = psi_k) and skew
// tensor Omega_k (div Omega_k = W_k), plus a scaling-law report.
#pragma once

#include "wildtorus/field.hpp"
#include "wildtorus/geometry.hpp"

#include <string>
#include <vector>

namespace wt {

// Transverse bump phi0 in C_c^inf((1/2,1)) and its derivatives.
double mikado_phi0(double s);
double mikado_phi0_d1(double s);
double mikado_phi0_d2(double s);

struct MikadoFamily {
    GridSpec grid;
    DirectionSet dirs;
    double mu = 8.0;
    int sigma = 1; // fields are sampled at sigma * x (periodic)

    // one entry per direction, all sampled on `grid`
    std::vector<Field> W;       // vector: psi_k e_k
    std::vector<Field> Omega;   // tensor: e_k (x) grad phi_k - grad phi_k (x) e_k
    std::vector<Field> psi;     // scalar
    std::vector<Field> phi;     // scalar potential (Delta phi_k = psi_k)
    std::vector<double> norm_const; // on-grid normalization applied per k
};

// Builds the family for every direction in `dirs`. Requires mu >= 4 and
// sigma*mu <= n/8 (tube cross-section resolved by >= 8 cells).
MikadoFamily build_mikado(const GridSpec& g, const DirectionSet& dirs, double mu, int sigma = 1);

// Exact periodic distance from x to the line {p + t k} + Z^d.
double periodic_line_distance(const double x[3], const std::array<double, 3>& p,
                              const std::array<double, 3>& e, int d);

struct MikadoReportRow {
    std::string label;       // quantity + direction, e.g. "W(1,0)", "Omega(1,0)"
    double mu = 0.0;
    double p = 0.0;          // Lebesgue exponent
    int m = 0;               // derivative order (0 for Omega/cross rows)
    double norm = 0.0;
    double fitted_exponent = 0.0; // common per (label,p,m) group
    double theory_exponent = 0.0;
};

// Measured L^p norms of W, grad W, Omega and one cross product W_k (x) W_k'
// over the mu list, with log-log fitted growth exponents vs the predicted
// ones: ||grad^m W||_p ~ mu^{m + (d-1)/2 - (d-1)/p},
// ||Omega||_p ~ mu^{-1 + (d-1)/2 - (d-1)/p}, ||W_k (x) W_k'||_p ~ mu^{(d-1) - d/p}.
std::vector<MikadoReportRow> mikado_report(const GridSpec& g, const DirectionSet& dirs,
                                           const std::vector<double>& mus,
                                           const std::vector<double>& ps);

} // namespace wt
