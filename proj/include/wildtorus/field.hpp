// Real-valued scalar/vector/tensor fields on a uniform T^d grid.
//
// Values live in physical space, component-major. Tensor fields store the
// full d*d component block row-major; symmetric/traceless structure is a
// property of the data, checked where the construction requires it.
#pragma once

#include "wildtorus/grid.hpp"

#include <cmath>
#include <complex>
#include <cstring>
#include <span>
#include <vector>

namespace wt {

enum class Rank { scalar, vector, tensor };

inline int rank_components(Rank r, int d) {
    switch (r) {
        case Rank::scalar: return 1;
        case Rank::vector: return d;
        case Rank::tensor: return d * d;
    }
    return 1;
}

class Field {
  public:
    Field() = default;
    Field(const GridSpec& g, Rank r)
        : grid_(g), rank_(r), ncomp_(rank_components(r, g.d)),
          data_(static_cast<std::size_t>(ncomp_) * g.points(), 0.0) {}

    static Field scalar(const GridSpec& g) { return Field(g, Rank::scalar); }
    static Field vector(const GridSpec& g) { return Field(g, Rank::vector); }
    static Field tensor(const GridSpec& g) { return Field(g, Rank::tensor); }

    const GridSpec& grid() const { return grid_; }
    Rank rank() const { return rank_; }
    int ncomp() const { return ncomp_; }
    std::size_t points() const { return grid_.points(); }

    std::span<double> comp(int c) {
        return {data_.data() + static_cast<std::size_t>(c) * points(), points()};
    }
    std::span<const double> comp(int c) const {
        return {data_.data() + static_cast<std::size_t>(c) * points(), points()};
    }

    // Tensor component (i,j).
    std::span<double> comp(int i, int j) { return comp(i * grid_.d + j); }
    std::span<const double> comp(int i, int j) const { return comp(i * grid_.d + j); }

    std::vector<double>& raw() { return data_; }
    const std::vector<double>& raw() const { return data_; }

    bool empty() const { return data_.empty(); }

    Field& operator+=(const Field& o) { return axpy(1.0, o); }
    Field& operator-=(const Field& o) { return axpy(-1.0, o); }
    Field& operator*=(double s) {
        for (double& v : data_) v *= s;
        return *this;
    }
    Field& axpy(double a, const Field& o) {
        for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += a * o.data_[i];
        return *this;
    }
    void zero() { std::memset(data_.data(), 0, data_.size() * sizeof(double)); }

    // Pointwise Euclidean magnitude across components (Frobenius for tensors).
    double max_abs() const {
        double m = 0.0;
        const std::size_t np = points();
        for (std::size_t p = 0; p < np; ++p) {
            double s = 0.0;
            for (int c = 0; c < ncomp_; ++c) {
                double v = data_[static_cast<std::size_t>(c) * np + p];
                s += v * v;
            }
            if (s > m) m = s;
        }
        return std::sqrt(m);
    }

    // Mean of each component over the grid.
    std::vector<double> means() const {
        std::vector<double> mu(ncomp_, 0.0);
        const std::size_t np = points();
        for (int c = 0; c < ncomp_; ++c) {
            double s = 0.0;
            for (std::size_t p = 0; p < np; ++p) s += data_[static_cast<std::size_t>(c) * np + p];
            mu[c] = s / static_cast<double>(np);
        }
        return mu;
    }

    void remove_mean() {
        auto mu = means();
        const std::size_t np = points();
        for (int c = 0; c < ncomp_; ++c)
            for (std::size_t p = 0; p < np; ++p) data_[static_cast<std::size_t>(c) * np + p] -= mu[c];
    }

  private:
    GridSpec grid_;
    Rank rank_ = Rank::scalar;
    int ncomp_ = 1;
    std::vector<double> data_;
};

inline Field operator+(Field a, const Field& b) { return a += b; }
inline Field operator-(Field a, const Field& b) { return a -= b; }
inline Field operator*(double s, Field a) { return a *= s; }

// Complex spectral coefficients of a Field, same layout (full c2c spectrum,
// component-major, FFT bin order).
struct SpectralField {
    GridSpec grid;
    Rank rank = Rank::scalar;
    int ncomp = 1;
    std::vector<std::complex<double>> data;

    std::span<std::complex<double>> comp(int c) {
        return {data.data() + static_cast<std::size_t>(c) * grid.points(), grid.points()};
    }
    std::span<const std::complex<double>> comp(int c) const {
        return {data.data() + static_cast<std::size_t>(c) * grid.points(), grid.points()};
    }
};

} // namespace wt
