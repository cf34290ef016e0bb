#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "helpers.hpp"
#include "wildtorus/geometry.hpp"

#include <cmath>
#include <random>

using namespace wt;
using namespace wt::testing;

namespace {

SymMat identity(int d) {
    SymMat S = {};
    for (int i = 0; i < d; ++i) S[static_cast<std::size_t>(i) * d + i] = 1.0;
    return S;
}

SymMat reconstruct(const DirectionSet& ds, const std::vector<double>& c) {
    SymMat S = {};
    for (int k = 0; k < ds.count(); ++k)
        for (int i = 0; i < ds.d; ++i)
            for (int j = 0; j < ds.d; ++j)
                S[static_cast<std::size_t>(i) * ds.d + j] += c[k] * ds.e[k][i] * ds.e[k][j];
    return S;
}

double frob_diff(const SymMat& A, const SymMat& B, int d) {
    double s = 0.0;
    for (int i = 0; i < d * d; ++i) {
        double v = A[i] - B[i];
        s += v * v;
    }
    return std::sqrt(s);
}

SymMat random_sym_near_id(int d, double radius, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    SymMat E = {};
    double norm2 = 0.0;
    for (int i = 0; i < d; ++i)
        for (int j = i; j < d; ++j) {
            double v = U(rng);
            E[static_cast<std::size_t>(i) * d + j] = v;
            E[static_cast<std::size_t>(j) * d + i] = v;
            norm2 += (i == j) ? v * v : 2 * v * v;
        }
    std::uniform_real_distribution<double> R(0.0, radius);
    double scale = R(rng) / std::sqrt(norm2);
    SymMat S = identity(d);
    for (int i = 0; i < d * d; ++i) S[i] += scale * E[i];
    return S;
}

} // namespace

TEST_CASE("direction sets") {
    SUBCASE("d=2") {
        DirectionSet ds = build_direction_set(2);
        CHECK(ds.count() == 3);
        CHECK(ds.gram_condition > 1.0);
        CHECK(ds.gram_condition < 100.0);
        // e for (1,2) is (1,2)/sqrt(5)
        CHECK(ds.e[1][0] == doctest::Approx(1.0 / std::sqrt(5.0)));
        CHECK(ds.e[1][1] == doctest::Approx(2.0 / std::sqrt(5.0)));
    }
    SUBCASE("d=3") {
        DirectionSet ds = build_direction_set(3);
        CHECK(ds.count() == 6);
        CHECK(ds.gram_condition < 100.0);
        MESSAGE("d=3 gram condition: " << ds.gram_condition);
    }
    SUBCASE("shifts distinct") {
        for (int d : {2, 3}) {
            DirectionSet ds = build_direction_set(d);
            for (int i = 0; i < ds.count(); ++i)
                for (int j = i + 1; j < ds.count(); ++j) {
                    bool same = true;
                    for (int a = 0; a < d; ++a)
                        if (ds.shift[i][a] != ds.shift[j][a]) same = false;
                    CHECK(!same);
                }
        }
    }
}

TEST_CASE("gamma coefficients at the identity") {
    SUBCASE("d=2: exact rationals (1/2, 5/6, 2/3)") {
        GammaSystem gs(build_direction_set(2));
        auto c = gs.coefficients(identity(2));
        CHECK(c[0] == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(c[1] == doctest::Approx(5.0 / 6.0).epsilon(1e-14));
        CHECK(c[2] == doctest::Approx(2.0 / 3.0).epsilon(1e-14));
        SymMat back = reconstruct(gs.directions(), c);
        CHECK(frob_diff(back, identity(2), 2) < 1e-14);
    }
    SUBCASE("d=3: all 1/2") {
        GammaSystem gs(build_direction_set(3));
        auto c = gs.coefficients(identity(3));
        for (double v : c) CHECK(v == doctest::Approx(0.5).epsilon(1e-13));
        SymMat back = reconstruct(gs.directions(), c);
        CHECK(frob_diff(back, identity(3), 3) < 1e-13);
    }
}

TEST_CASE("Monte-Carlo positivity and reconstruction inside r_gamma") {
    for (int d : {2, 3}) {
        GammaSystem gs(build_direction_set(d));
        std::mt19937_64 rng(2024 + d);
        for (int trial = 0; trial < 1000; ++trial) {
            SymMat S = random_sym_near_id(d, gs.r_gamma(), rng);
            std::vector<double> c;
            REQUIRE_NOTHROW(c = gs.coefficients(S));
            for (double v : c) CHECK(v > 0.0);
            SymMat back = reconstruct(gs.directions(), c);
            CHECK(frob_diff(back, S, d) <= 1e-12);
            auto gm = gs.gamma(S);
            for (int k = 0; k < gs.directions().count(); ++k)
                CHECK(gm[k] * gm[k] == doctest::Approx(c[k]).epsilon(1e-14));
        }
    }
}

TEST_CASE("coefficients are exactly linear in S") {
    GammaSystem gs(build_direction_set(2));
    std::mt19937_64 rng(9);
    SymMat A = random_sym_near_id(2, 0.2, rng);
    SymMat B = random_sym_near_id(2, 0.2, rng);
    SymMat mid;
    for (int i = 0; i < 4; ++i) mid[i] = 0.5 * (A[i] + B[i]);
    auto ca = gs.coefficients(A);
    auto cb = gs.coefficients(B);
    auto cm = gs.coefficients(mid);
    for (std::size_t k = 0; k < ca.size(); ++k)
        CHECK(cm[k] == doctest::Approx(0.5 * (ca[k] + cb[k])).epsilon(1e-14));
}

TEST_CASE("outside the validity ball the solver rejects") {
    GammaSystem gs(build_direction_set(2));
    // S with large negative off-diagonal drives c_3 = 2/3 + (2/3)E22 - (4/3)E12
    // negative.
    SymMat S = identity(2);
    S[1] = S[2] = 1.0; // E12 = 1
    CHECK_THROWS_AS((void)gs.coefficients(S), DomainError);
}

TEST_CASE("chi cutoff") {
    CHECK(chi_cutoff(0.0) == 1.0);
    CHECK(chi_cutoff(1.0) == 1.0);
    CHECK(chi_cutoff(2.0) == 2.0);
    CHECK(chi_cutoff(5.0) == 5.0);
    // monotone, >= 1, and s/chi <= 2 on a dense sweep
    double prev = 1.0;
    for (int i = 0; i <= 3000; ++i) {
        double s = 3.0 * i / 3000.0;
        double v = chi_cutoff(s);
        CHECK(v >= prev - 1e-12);
        CHECK(v >= 1.0);
        CHECK(s <= 2.0 * v + 1e-12);
        prev = v;
    }
    // C^1 continuity at the knots
    double h = 1e-6;
    CHECK(std::abs((chi_cutoff(1 + h) - chi_cutoff(1 - h)) / (2 * h)) < 1e-5);
    CHECK(std::abs((chi_cutoff(2 + h) - chi_cutoff(2 - h)) / (2 * h) - 1.0) < 1e-5);
}

TEST_CASE("rho_field admissibility") {
    GridSpec g(2, 64);
    GammaSystem gs(build_direction_set(2));
    SUBCASE("zero stress") {
        Field R = Field::tensor(g);
        Field rho = rho_field(R, gs.r_gamma());
        for (double v : rho.comp(0)) CHECK(v == doctest::Approx(2.0 / gs.r_gamma()));
    }
    SUBCASE("synthetic stress across amplitudes") {
        std::mt19937_64 rng(77);
        for (double amp : {0.01, 1.0, 50.0}) {
            Field R = random_band_limited(g, 3, rng, Rank::tensor);
            R *= amp / R.max_abs();
            // symmetrize pointwise
            auto a = R.comp(0, 1);
            auto b = R.comp(1, 0);
            for (std::size_t p = 0; p < g.points(); ++p) a[p] = b[p] = 0.5 * (a[p] + b[p]);
            Field rho = rho_field(R, gs.r_gamma());
            const std::size_t np = g.points();
            double worst = 0.0;
            for (std::size_t p = 0; p < np; ++p) {
                double s = 0.0;
                for (int c = 0; c < 4; ++c) {
                    double v = R.comp(c)[p];
                    s += v * v;
                }
                worst = std::max(worst, std::sqrt(s) / rho.comp(0)[p]);
            }
            CHECK(worst <= gs.r_gamma() * (1 + 1e-12));
            // and the shifted matrix is admissible everywhere
            for (std::size_t p = 0; p < np; p += 97) {
                SymMat S = identity(2);
                for (int i = 0; i < 2; ++i)
                    for (int j = 0; j < 2; ++j)
                        S[static_cast<std::size_t>(i) * 2 + j] -= R.comp(i, j)[p] / rho.comp(0)[p];
                CHECK_NOTHROW((void)gs.coefficients(S));
            }
            // large amplitude: rho ~ (2/r) |R|
            if (amp == 50.0) {
                std::size_t pmax = 0;
                double best = 0.0;
                for (std::size_t p = 0; p < np; ++p) {
                    double s = 0.0;
                    for (int c = 0; c < 4; ++c) s += R.comp(c)[p] * R.comp(c)[p];
                    if (s > best) {
                        best = s;
                        pmax = p;
                    }
                }
                double frob = std::sqrt(best);
                CHECK(rho.comp(0)[pmax] == doctest::Approx(2.0 / gs.r_gamma() * frob).epsilon(1e-12));
            }
        }
    }
}
