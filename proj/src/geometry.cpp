#include "wildtorus/geometry.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace wt {
namespace {

// Published shift lattice; p_k != p_{-k} is automatic since no direction and
// its negative both appear in the sets below.
constexpr double kShiftBase[3] = {0.29, 0.41, 0.53};

std::array<double, 3> shift_for(int j, int d) {
    std::array<double, 3> p = {0, 0, 0};
    for (int a = 0; a < d; ++a) p[a] = std::fmod((j + 1) * kShiftBase[a], 1.0);
    return p;
}

// Independent symmetric components: diagonal first, then upper off-diagonals.
int sym_count(int d) { return d * (d + 1) / 2; }

void sym_components(const SymMat& S, int d, double* out) {
    int idx = 0;
    for (int i = 0; i < d; ++i) out[idx++] = S[static_cast<std::size_t>(i) * d + i];
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) out[idx++] = S[static_cast<std::size_t>(i) * d + j];
}

} // namespace

DirectionSet build_direction_set(int d) {
    if (d != 2 && d != 3) throw std::invalid_argument("build_direction_set: d must be 2 or 3");
    DirectionSet ds;
    ds.d = d;
    if (d == 2) {
        ds.k = {{{1, 0, 0}}, {{1, 2, 0}}, {{1, -1, 0}}};
    } else {
        ds.k = {{{1, 1, 0}}, {{1, -1, 0}}, {{0, 1, 1}}, {{0, 1, -1}}, {{1, 0, 1}}, {{-1, 0, 1}}};
    }
    for (int j = 0; j < ds.count(); ++j) {
        double n2 = 0.0;
        for (int a = 0; a < d; ++a) n2 += static_cast<double>(ds.k[j][a]) * ds.k[j][a];
        double inv = 1.0 / std::sqrt(n2);
        std::array<double, 3> e = {0, 0, 0};
        for (int a = 0; a < d; ++a) e[a] = ds.k[j][a] * inv;
        ds.e.push_back(e);
        ds.shift.push_back(shift_for(j, d));
    }
    // Gram matrix of the dyads: G_kl = (e_k . e_l)^2.
    const int m = ds.count();
    Eigen::MatrixXd G(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            double dot = 0.0;
            for (int a = 0; a < d; ++a) dot += ds.e[i][a] * ds.e[j][a];
            G(i, j) = dot * dot;
        }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    double lmin = es.eigenvalues().minCoeff();
    double lmax = es.eigenvalues().maxCoeff();
    if (lmin <= 0.0) throw std::runtime_error("build_direction_set: dyads do not span Sym(d)");
    ds.gram_condition = lmax / lmin;
    return ds;
}

GammaSystem::GammaSystem(const DirectionSet& dirs) : dirs_(dirs) {
    const int d = dirs_.d;
    nsym_ = sym_count(d);
    if (dirs_.count() != nsym_)
        throw std::invalid_argument("GammaSystem: direction count must equal dim Sym(d)");
    Eigen::MatrixXd M(nsym_, nsym_);
    for (int col = 0; col < nsym_; ++col) {
        SymMat dyad = {};
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                dyad[static_cast<std::size_t>(i) * d + j] = dirs_.e[col][i] * dirs_.e[col][j];
        double comp[6];
        sym_components(dyad, d, comp);
        for (int row = 0; row < nsym_; ++row) M(row, col) = comp[row];
    }
    Eigen::MatrixXd inv = M.inverse();
    solve_.assign(static_cast<std::size_t>(nsym_) * nsym_, 0.0);
    for (int i = 0; i < nsym_; ++i)
        for (int j = 0; j < nsym_; ++j) solve_[static_cast<std::size_t>(i) * nsym_ + j] = inv(i, j);
}

std::vector<double> GammaSystem::coefficients(const SymMat& S) const {
    double comp[6];
    sym_components(S, dirs_.d, comp);
    std::vector<double> c(nsym_, 0.0);
    for (int i = 0; i < nsym_; ++i) {
        double s = 0.0;
        for (int j = 0; j < nsym_; ++j) s += solve_[static_cast<std::size_t>(i) * nsym_ + j] * comp[j];
        c[i] = s;
        if (!(s > 0.0)) throw DomainError("GammaSystem: nonpositive coefficient (S outside validity ball)");
    }
    return c;
}

std::vector<double> GammaSystem::gamma(const SymMat& S) const {
    std::vector<double> c = coefficients(S);
    for (double& x : c) x = std::sqrt(x);
    return c;
}

void GammaSystem::gamma_into(const SymMat& S, double* out) const {
    double comp[6];
    sym_components(S, dirs_.d, comp);
    for (int i = 0; i < nsym_; ++i) {
        double s = 0.0;
        for (int j = 0; j < nsym_; ++j)
            s += solve_[static_cast<std::size_t>(i) * nsym_ + j] * comp[j];
        if (!(s > 0.0))
            throw DomainError("GammaSystem: nonpositive coefficient (S outside validity ball)");
        out[i] = std::sqrt(s);
    }
}

double chi_cutoff(double s) {
    if (s <= 1.0) return 1.0;
    if (s >= 2.0) return s;
    // Quintic Hermite on [1,2]: values (1,2), first derivatives (0,1),
    // second derivatives (0,0).
    double t = s - 1.0;
    double t3 = t * t * t;
    // h(t) = 1 + t^3 (a + b t + c t^2) with h(1)=2, h'(1)=1, h''(1)=0
    //   a + b + c = 1; 3a + 4b + 5c = 1; 6a + 12b + 20c = 0
    //   -> a = 6, b = -8, c = 3; h'(t) = t^2 (15 t^2 - 32 t + 18) > 0
    return 1.0 + t3 * (6.0 + t * (-8.0 + 3.0 * t));
}

Field rho_field(const Field& Rbar, double r_gamma) {
    if (Rbar.rank() != Rank::tensor) throw std::invalid_argument("rho_field: tensor required");
    Field rho = Field::scalar(Rbar.grid());
    const std::size_t np = Rbar.points();
    const int nc = Rbar.ncomp();
    const double scale = 2.0 / r_gamma;
    auto dst = rho.comp(0);
    for (std::size_t p = 0; p < np; ++p) {
        double s = 0.0;
        for (int c = 0; c < nc; ++c) {
            double v = Rbar.comp(c)[p];
            s += v * v;
        }
        dst[p] = scale * chi_cutoff(std::sqrt(s));
    }
    return rho;
}

} // namespace wt
