// Uniform collocation grid on the periodic box [0,1)^d.
#pragma once

#include <cstddef>
#include <stdexcept>

namespace wt {

struct GridSpec {
    int d = 2;  // spatial dimension, 2 or 3
    int n = 64; // points per axis, power of two, >= 8

    GridSpec() = default;
    GridSpec(int d_, int n_) : d(d_), n(n_) { validate(); }

    void validate() const {
        if (d != 2 && d != 3) throw std::invalid_argument("GridSpec: d must be 2 or 3");
        if (n < 8) throw std::invalid_argument("GridSpec: n must be >= 8");
        if ((n & (n - 1)) != 0) throw std::invalid_argument("GridSpec: n must be a power of two");
    }

    std::size_t points() const {
        std::size_t p = 1;
        for (int i = 0; i < d; ++i) p *= static_cast<std::size_t>(n);
        return p;
    }

    double h() const { return 1.0 / n; }

    bool operator==(const GridSpec& o) const { return d == o.d && n == o.n; }
    bool operator!=(const GridSpec& o) const { return !(*this == o); }
};

// Signed integer wavenumber for FFT bin m on an n-point axis.
inline int wavenumber(int m, int n) { return m <= n / 2 ? m : m - n; }

} // namespace wt
