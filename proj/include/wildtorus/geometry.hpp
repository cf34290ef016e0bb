// Direction sets and the positive-coefficient decomposition of symmetric
// matrices near the identity: S = sum_k Gamma_k(S)^2 e_k (x) e_k, plus the
// stress-normalization field rho.
#pragma once

#include "wildtorus/field.hpp"

#include <array>
#include <stdexcept>
#include <vector>

namespace wt {

// Symmetric d x d matrix stored as full row-major d*d block (d <= 3).
using SymMat = std::array<double, 9>;

struct DirectionSet {
    int d = 2;
    std::vector<std::array<int, 3>> k;      // integer directions
    std::vector<std::array<double, 3>> e;   // unit directions k/|k|
    std::vector<std::array<double, 3>> shift; // line shifts p_k in (0,1)^d
    double gram_condition = 0.0;            // cond of the dyad Gram matrix

    int count() const { return static_cast<int>(k.size()); }
};

// d=2: {(1,0),(1,2),(1,-1)} — the unique reconstruction of Id has
// coefficients (1/2, 5/6, 2/3), all strictly positive.
// d=3: the six edge diagonals {(1,±1,0),(0,1,±1),(±1,0,1)} — Id decomposes
// with all coefficients 1/2.
DirectionSet build_direction_set(int d);

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class GammaSystem {
  public:
    explicit GammaSystem(const DirectionSet& dirs);

    const DirectionSet& directions() const { return dirs_; }

    // Validity radius: min_k c_k(S) > 0 is guaranteed (and swept) for
    // ||S - Id||_F <= r_gamma.
    double r_gamma() const { return r_gamma_; }

    // c_k(S): the unique linear solution of sum c_k e_k(x)e_k = S.
    // Throws DomainError if any c_k <= 0.
    std::vector<double> coefficients(const SymMat& S) const;

    // Gamma_k(S) = sqrt(c_k(S)).
    std::vector<double> gamma(const SymMat& S) const;

    // Allocation-free variant for per-grid-point sweeps; writes count()
    // values into `out`.
    void gamma_into(const SymMat& S, double* out) const;

  private:
    DirectionSet dirs_;
    double r_gamma_ = 0.25;
    // Precomputed inverse of the reconstruction system in the independent
    // sym-component basis (row-major count x count).
    std::vector<double> solve_;
    int nsym_ = 0;
};

// Smooth monotone cutoff: chi(s) = 1 for s <= 1, chi(s) = s for s >= 2,
// C^2 quintic interpolation in between. Satisfies s/chi(s) <= 2 everywhere.
double chi_cutoff(double s);

// rho(x) = (2/r_gamma) * chi(|Rbar(x)|_F), so that
// ||Rbar(x)/rho(x)||_F <= r_gamma at every grid point.
Field rho_field(const Field& Rbar, double r_gamma);

} // namespace wt
