// Shared test utilities: analytic grid fills and random band-limited fields.
#pragma once

#include "wildtorus/field.hpp"

#include <functional>
#include <numbers>
#include <random>

namespace wt::testing {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline void fill_grid(Field& f, int c, const std::function<double(double, double, double)>& fn) {
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

// Random zero-mean field with modes |k|_inf <= kmax (works for d=2 and d=3).
inline Field random_band_limited(const GridSpec& g, int kmax, std::mt19937_64& rng,
                                 Rank rank = Rank::scalar) {
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    Field f(g, rank);
    const int kz = (g.d == 3) ? kmax : 0;
    for (int c = 0; c < f.ncomp(); ++c) {
        auto dst = f.comp(c);
        for (int kx = -kmax; kx <= kmax; ++kx)
            for (int ky = -kmax; ky <= kmax; ++ky)
                for (int kzi = -kz; kzi <= kz; ++kzi) {
                    if (kx == 0 && ky == 0 && kzi == 0) continue;
                    double a = U(rng), b = U(rng);
                    Field mode(g, Rank::scalar);
                    fill_grid(mode, 0, [&](double x, double y, double z) {
                        double ph = kTwoPi * (kx * x + ky * y + kzi * z);
                        return a * std::cos(ph) + b * std::sin(ph);
                    });
                    auto src = mode.comp(0);
                    for (std::size_t i = 0; i < f.points(); ++i) dst[i] += src[i];
                }
    }
    return f;
}

} // namespace wt::testing
