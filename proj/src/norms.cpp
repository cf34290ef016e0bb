#include "wildtorus/norms.hpp"

#include "wildtorus/fft.hpp"
#include "wildtorus/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace wt {

double lp_norm(const Field& f, double p) {
    if (p < 1.0) throw std::invalid_argument("lp_norm: p >= 1 required");
    const std::size_t np = f.points();
    const int nc = f.ncomp();
    if (p == kInf) return f.max_abs();
    double acc = 0.0;
    for (std::size_t i = 0; i < np; ++i) {
        double s = 0.0;
        for (int c = 0; c < nc; ++c) {
            double v = f.comp(c)[i];
            s += v * v;
        }
        double mag = std::sqrt(s);
        acc += (p == 2.0) ? s : ((p == 1.0) ? mag : std::pow(mag, p));
    }
    acc /= static_cast<double>(np);
    if (p == 2.0) return std::sqrt(acc);
    if (p == 1.0) return acc;
    return std::pow(acc, 1.0 / p);
}

double c1_norm(const Field& a) {
    double m = a.max_abs();
    Field g = gradient(a);
    return m + g.max_abs();
}

double sobolev_norm(const Field& f, int s) {
    // Parseval: sum over modes of (1 + |2 pi k|^2)^s |f_hat|^2.
    SpectralField sp = fft(f);
    const int n = sp.grid.n;
    const double norm = static_cast<double>(sp.grid.points());
    double acc = 0.0;
    const std::size_t np = sp.grid.points();
    for (int c = 0; c < sp.ncomp; ++c) {
        std::size_t idx = 0;
        if (sp.grid.d == 2) {
            for (int m0 = 0; m0 < n; ++m0) {
                int k0 = wavenumber(m0, n);
                for (int m1 = 0; m1 < n; ++m1, ++idx) {
                    int k1 = wavenumber(m1, n);
                    double k2 = 4.0 * M_PI * M_PI * (static_cast<double>(k0) * k0 + static_cast<double>(k1) * k1);
                    double w = std::pow(1.0 + k2, s);
                    double mag2 = std::norm(sp.data[static_cast<std::size_t>(c) * np + idx] / norm);
                    acc += w * mag2;
                }
            }
        } else {
            for (int m0 = 0; m0 < n; ++m0) {
                int k0 = wavenumber(m0, n);
                for (int m1 = 0; m1 < n; ++m1) {
                    int k1 = wavenumber(m1, n);
                    for (int m2 = 0; m2 < n; ++m2, ++idx) {
                        int k2i = wavenumber(m2, n);
                        double k2 = 4.0 * M_PI * M_PI *
                                    (static_cast<double>(k0) * k0 + static_cast<double>(k1) * k1 +
                                     static_cast<double>(k2i) * k2i);
                        double w = std::pow(1.0 + k2, s);
                        double mag2 = std::norm(sp.data[static_cast<std::size_t>(c) * np + idx] / norm);
                        acc += w * mag2;
                    }
                }
            }
        }
    }
    return std::sqrt(acc);
}

double w1q_norm(const Field& f, double q) {
    return lp_norm(f, q) + lp_norm(gradient(f), q);
}

double time_lp(const std::vector<double>& times, const std::vector<double>& vals, double p_t) {
    if (times.size() != vals.size() || times.size() < 2)
        throw std::invalid_argument("time_lp: bad sizes");
    if (p_t == kInf) {
        double m = 0.0;
        for (double v : vals) m = std::max(m, std::abs(v));
        return m;
    }
    double acc = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        double a = std::pow(std::abs(vals[i - 1]), p_t);
        double b = std::pow(std::abs(vals[i]), p_t);
        acc += 0.5 * (a + b) * (times[i] - times[i - 1]);
    }
    return std::pow(acc, 1.0 / p_t);
}

double mixed_norm(const TimeSeriesField& s, double p_t, double q_x) {
    s.validate();
    if (p_t != kInf && !s.uniform())
        throw std::invalid_argument("mixed_norm: non-uniform time grid requires p_t = inf");
    std::vector<double> vals(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) vals[i] = lp_norm(s.frames[i], q_x);
    return time_lp(s.times, vals, p_t);
}

} // namespace wt
