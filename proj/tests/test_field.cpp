#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "wildtorus/fft.hpp"
#include "wildtorus/field.hpp"
#include "wildtorus/io.hpp"
#include "wildtorus/norms.hpp"
#include "wildtorus/spectral.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

using namespace wt;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void fill_grid(Field& f, int c, const std::function<double(double, double, double)>& fn) {
    const GridSpec& g = f.grid();
    auto dst = f.comp(c);
    if (g.d == 2) {
        std::size_t idx = 0;
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j, ++idx) dst[idx] = fn(double(i) / g.n, double(j) / g.n, 0.0);
    } else {
        std::size_t idx = 0;
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j)
                for (int k = 0; k < g.n; ++k, ++idx)
                    dst[idx] = fn(double(i) / g.n, double(j) / g.n, double(k) / g.n);
    }
}

// Random band-limited scalar field, modes up to kmax, zero mean.
Field random_band_limited(const GridSpec& g, int kmax, std::mt19937_64& rng, Rank rank = Rank::scalar) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    Field f(g, rank);
    for (int c = 0; c < f.ncomp(); ++c) {
        for (int kx = -kmax; kx <= kmax; ++kx)
            for (int ky = -kmax; ky <= kmax; ++ky) {
                if (kx == 0 && ky == 0) continue;
                double a = U(rng), b = U(rng);
                Field mode(g, Rank::scalar);
                fill_grid(mode, 0, [&](double x, double y, double) {
                    return a * std::cos(kTwoPi * (kx * x + ky * y)) + b * std::sin(kTwoPi * (kx * x + ky * y));
                });
                auto src = mode.comp(0);
                auto dst = f.comp(c);
                for (std::size_t i = 0; i < f.points(); ++i) dst[i] += src[i];
            }
    }
    return f;
}

} // namespace

TEST_CASE("fft round trip") {
    GridSpec g(2, 32);
    std::mt19937_64 rng(7);
    Field f = random_band_limited(g, 3, rng);
    Field f2 = ifft(fft(f), Rank::scalar);
    f2 -= f;
    CHECK(f2.max_abs() < 1e-12 * f.max_abs());
}

TEST_CASE("spectral derivative: single mode") {
    GridSpec g(2, 32);
    Field f = Field::scalar(g);
    fill_grid(f, 0, [](double x, double, double) { return std::cos(kTwoPi * x); });
    Field d2 = spectral_derivative(f, {2, 0, 0});
    // d^2/dx^2 cos(2 pi x) = -4 pi^2 cos(2 pi x)
    Field expect = f;
    expect *= -kTwoPi * kTwoPi;
    d2 -= expect;
    CHECK(d2.max_abs() < 1e-10);
}

TEST_CASE("spectral derivative: constants annihilated") {
    GridSpec g(2, 16);
    Field f = Field::scalar(g);
    fill_grid(f, 0, [](double, double, double) { return 3.25; });
    CHECK(spectral_derivative(f, {1, 0, 0}).max_abs() < 1e-13);
    CHECK(spectral_derivative(f, {1, 2, 0}).max_abs() < 1e-13);
}

TEST_CASE("spectral derivative rejects |alpha| > 4") {
    GridSpec g(2, 16);
    Field f = Field::scalar(g);
    CHECK_THROWS(spectral_derivative(f, {3, 2, 0}));
}

TEST_CASE("laplacian matches 2nd-order finite differences at rate h^2") {
    std::mt19937_64 rng(11);
    double prev_err = 0.0;
    std::vector<double> errs;
    for (int n : {32, 64, 128}) {
        GridSpec g(2, n);
        // Same continuum field on every grid.
        std::mt19937_64 rng_local(13);
        Field f = random_band_limited(g, 3, rng_local);
        Field lap = laplacian(f);
        // FD oracle: 5-point stencil at h = 1/n.
        Field fd = Field::scalar(g);
        auto src = f.comp(0);
        auto dst = fd.comp(0);
        const double h2 = 1.0 / (g.h() * g.h());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                auto at = [&](int a, int b) {
                    return src[std::size_t(((a + n) % n)) * n + std::size_t((b + n) % n)];
                };
                dst[std::size_t(i) * n + j] =
                    (at(i + 1, j) + at(i - 1, j) + at(i, j + 1) + at(i, j - 1) - 4.0 * at(i, j)) * h2;
            }
        fd -= lap;
        double err = fd.max_abs() / lap.max_abs();
        errs.push_back(err);
        if (prev_err > 0.0) CHECK(prev_err / err > 3.0); // ~4x per halving
        prev_err = err;
    }
    (void)rng;
}

TEST_CASE("leray projection") {
    GridSpec g(2, 64);
    SUBCASE("pure gradient maps to zero") {
        Field s = Field::scalar(g);
        fill_grid(s, 0, [](double x, double y, double) {
            return std::sin(kTwoPi * x) * std::sin(kTwoPi * y);
        });
        Field v = gradient(s);
        CHECK(leray_project(v).max_abs() < 1e-10 * v.max_abs());
    }
    SUBCASE("divergence-free field is fixed") {
        Field v = Field::vector(g);
        fill_grid(v, 0, [](double, double y, double) { return std::sin(kTwoPi * y); });
        Field pv = leray_project(v);
        pv -= v;
        CHECK(pv.max_abs() < 1e-12);
    }
    SUBCASE("per-mode multiplier oracle") {
        Field v = Field::vector(g);
        fill_grid(v, 0, [](double x, double, double) { return std::sin(kTwoPi * x); });
        Field pv = leray_project(v);
        // k = (1,0): (Id - k k^T/|k|^2) e_1 = 0 -> projection kills it.
        CHECK(pv.max_abs() < 1e-12);
        CHECK(divergence(pv).max_abs() < 1e-12);
    }
    SUBCASE("div(P v) = 0 and idempotency on random fields") {
        std::mt19937_64 rng(3);
        Field v = random_band_limited(g, 4, rng, Rank::vector);
        v.remove_mean();
        Field pv = leray_project(v);
        CHECK(divergence(pv).max_abs() <= 1e-10 * v.max_abs());
        Field ppv = leray_project(pv);
        ppv -= pv;
        CHECK(ppv.max_abs() <= 1e-12 * pv.max_abs());
    }
}

TEST_CASE("inverse laplacian") {
    GridSpec g(2, 32);
    SUBCASE("single mode") {
        Field f = Field::scalar(g);
        fill_grid(f, 0, [](double x, double, double) { return std::cos(kTwoPi * x); });
        Field v = inv_laplacian(f);
        Field expect = f;
        expect *= -1.0 / (kTwoPi * kTwoPi);
        v -= expect;
        CHECK(v.max_abs() < 1e-12);
    }
    SUBCASE("constant maps to zero") {
        Field f = Field::scalar(g);
        fill_grid(f, 0, [](double, double, double) { return 4.0; });
        CHECK(inv_laplacian(f).max_abs() < 1e-13);
    }
    SUBCASE("identity Delta(inv_laplacian f) + mean = f") {
        std::mt19937_64 rng(5);
        Field f = random_band_limited(g, 4, rng);
        auto mu = f.means();
        Field back = laplacian(inv_laplacian(f));
        auto dst = back.comp(0);
        for (std::size_t i = 0; i < back.points(); ++i) dst[i] += mu[0];
        back -= f;
        CHECK(back.max_abs() < 1e-10 * f.max_abs());
    }
    SUBCASE("rescaling identity inv_laplacian(f(sigma x)) = sigma^-2 v(sigma x)") {
        std::mt19937_64 rng(6);
        Field f = random_band_limited(g, 3, rng);
        const int sigma = 4;
        Field lhs = inv_laplacian(rescale_spatial(f, sigma));
        Field rhs = rescale_spatial(inv_laplacian(f), sigma);
        rhs *= 1.0 / (sigma * sigma);
        lhs -= rhs;
        CHECK(lhs.max_abs() < 1e-11 * inv_laplacian(f).max_abs());
    }
}

TEST_CASE("parseval") {
    GridSpec g(2, 64);
    std::mt19937_64 rng(17);
    Field f = random_band_limited(g, 5, rng);
    double l2 = lp_norm(f, 2.0);
    SpectralField s = fft(f);
    double acc = 0.0;
    const double N = static_cast<double>(g.points());
    for (const auto& z : s.data) acc += std::norm(z / N);
    CHECK(std::abs(l2 * l2 - acc) < 1e-12 * acc);
}

TEST_CASE("dealiased product is exact for band-limited factors") {
    GridSpec g(2, 64);
    Field a = Field::scalar(g), b = Field::scalar(g);
    fill_grid(a, 0, [](double x, double, double) { return std::cos(kTwoPi * 5 * x); });
    fill_grid(b, 0, [](double x, double, double) { return std::cos(kTwoPi * 7 * x); });
    Field ab = multiply(a, b);
    Field exact = Field::scalar(g);
    fill_grid(exact, 0, [](double x, double, double) {
        return 0.5 * (std::cos(kTwoPi * 12 * x) + std::cos(kTwoPi * 2 * x));
    });
    ab -= exact;
    CHECK(ab.max_abs() < 1e-12);
}

TEST_CASE("dealiasing discards the top third") {
    // cos(20 x) * cos(20 x) = 1/2 + 1/2 cos(40 x); on n=64 the 40-mode
    // aliases in naive grid products but must be cleanly dropped here.
    GridSpec g(2, 64);
    Field a = Field::scalar(g);
    fill_grid(a, 0, [](double x, double, double) { return std::cos(kTwoPi * 20 * x); });
    Field aa = multiply(a, a);
    Field expect = Field::scalar(g);
    fill_grid(expect, 0, [](double, double, double) { return 0.5; });
    aa -= expect;
    CHECK(aa.max_abs() < 1e-12);
}

TEST_CASE("mixed norms") {
    GridSpec g(2, 32);
    SUBCASE("constant field") {
        TimeSeriesField s;
        for (int i = 0; i <= 8; ++i) {
            s.times.push_back(i / 8.0);
            Field f = Field::scalar(g);
            fill_grid(f, 0, [](double, double, double) { return -2.5; });
            s.frames.push_back(std::move(f));
        }
        CHECK(mixed_norm(s, 1.0, 3.0) == doctest::Approx(2.5).epsilon(1e-12));
        CHECK(mixed_norm(s, kInf, kInf) == doctest::Approx(2.5).epsilon(1e-12));
    }
    SUBCASE("sin mode, p=q=2 gives 1/sqrt(2)") {
        TimeSeriesField s;
        for (int i = 0; i <= 16; ++i) {
            s.times.push_back(i / 16.0);
            Field f = Field::scalar(g);
            fill_grid(f, 0, [](double x, double, double) { return std::sin(kTwoPi * x); });
            s.frames.push_back(std::move(f));
        }
        CHECK(mixed_norm(s, 2.0, 2.0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
    }
    SUBCASE("monotone in q") {
        std::mt19937_64 rng(23);
        TimeSeriesField s;
        for (int i = 0; i <= 8; ++i) {
            s.times.push_back(i / 8.0);
            s.frames.push_back(random_band_limited(g, 3, rng));
        }
        double n1 = mixed_norm(s, 2.0, 1.0);
        double n2 = mixed_norm(s, 2.0, 2.0);
        double n4 = mixed_norm(s, 2.0, 4.0);
        CHECK(n1 <= n2 * (1.0 + 1e-9));
        CHECK(n2 <= n4 * (1.0 + 1e-9));
    }
    SUBCASE("non-uniform grid rejected for finite p_t") {
        TimeSeriesField s;
        s.times = {0.0, 0.5, 0.6, 1.0};
        for (int i = 0; i < 4; ++i) s.frames.push_back(Field::scalar(g));
        CHECK_THROWS(mixed_norm(s, 2.0, 2.0));
        CHECK_NOTHROW(mixed_norm(s, kInf, 2.0));
    }
}

TEST_CASE("compute_pressure") {
    GridSpec g(2, 32);
    SUBCASE("zero inputs") {
        Field u = Field::vector(g), R = Field::tensor(g);
        CHECK(compute_pressure(u, R).max_abs() < 1e-14);
    }
    SUBCASE("single-mode stress: R11 = cos(2 pi x1) gives p = cos(2 pi x1)") {
        Field u = Field::vector(g), R = Field::tensor(g);
        fill_grid(R, 0, [](double x, double, double) { return std::cos(kTwoPi * x); });
        Field p = compute_pressure(u, R);
        Field expect = Field::scalar(g);
        fill_grid(expect, 0, [](double x, double, double) { return std::cos(kTwoPi * x); });
        p -= expect;
        CHECK(p.max_abs() < 1e-12);
    }
    SUBCASE("shear flow has zero pressure") {
        Field u = Field::vector(g), R = Field::tensor(g);
        fill_grid(u, 0, [](double, double y, double) { return std::sin(kTwoPi * y); });
        CHECK(compute_pressure(u, R).max_abs() < 1e-12);
    }
}

TEST_CASE("tfield round trip") {
    GridSpec g(2, 16);
    std::mt19937_64 rng(29);
    Field f = random_band_limited(g, 2, rng, Rank::vector);
    std::string path = "/tmp/wt_test_roundtrip.tfield";
    write_tfield(path, f, 0.375);
    TFieldSnapshot snap = read_tfield(path);
    CHECK(snap.time == 0.375);
    CHECK(snap.field.grid() == g);
    CHECK(snap.field.rank() == Rank::vector);
    Field diff = snap.field;
    diff -= f;
    CHECK(diff.max_abs() == 0.0);
    std::remove(path.c_str());
}

TEST_CASE("3d sanity: derivative and leray") {
    GridSpec g(3, 16);
    Field f = Field::scalar(g);
    fill_grid(f, 0, [](double x, double y, double z) {
        return std::sin(kTwoPi * x) * std::cos(kTwoPi * y) * std::cos(kTwoPi * z);
    });
    Field lap = laplacian(f);
    Field expect = f;
    expect *= -3.0 * kTwoPi * kTwoPi;
    lap -= expect;
    CHECK(lap.max_abs() < 1e-10);

    Field v = gradient(f);
    CHECK(leray_project(v).max_abs() < 1e-10 * v.max_abs());
}
