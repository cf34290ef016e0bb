#include "wildtorus/timeseries.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace wt {

void TimeSeriesField::validate() const {
    if (times.size() != frames.size()) throw std::invalid_argument("TimeSeriesField: size mismatch");
    if (times.size() < 2) throw std::invalid_argument("TimeSeriesField: need >= 2 nodes");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (times[i] <= times[i - 1]) throw std::invalid_argument("TimeSeriesField: times not increasing");
    for (const Field& f : frames)
        if (f.grid() != frames.front().grid()) throw std::invalid_argument("TimeSeriesField: grid mismatch");
}

bool TimeSeriesField::uniform(double tol) const {
    if (times.size() < 3) return true;
    const double dt = times[1] - times[0];
    for (std::size_t i = 2; i < times.size(); ++i)
        if (std::abs((times[i] - times[i - 1]) - dt) > tol * std::max(1.0, dt)) return false;
    return true;
}

std::size_t TimeSeriesField::locate(double t) const {
    auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.begin()) return 0;
    return static_cast<std::size_t>(it - times.begin()) - 1;
}

void lagrange_weights(const double* ts, int m, double t, double* w_val, double* w_der) {
    for (int i = 0; i < m; ++i) {
        double num = 1.0, den = 1.0;
        for (int j = 0; j < m; ++j) {
            if (j == i) continue;
            num *= (t - ts[j]);
            den *= (ts[i] - ts[j]);
        }
        if (w_val) w_val[i] = num / den;
        if (w_der) {
            double dsum = 0.0;
            for (int kk = 0; kk < m; ++kk) {
                if (kk == i) continue;
                double prod = 1.0;
                for (int j = 0; j < m; ++j) {
                    if (j == i || j == kk) continue;
                    prod *= (t - ts[j]);
                }
                dsum += prod;
            }
            w_der[i] = dsum / den;
        }
    }
}

namespace {

// Pick a 4-node stencil around t (clamped).
std::size_t stencil_start(const TimeSeriesField& s, double t, int m) {
    std::size_t i = s.locate(t);
    std::size_t lo = (i >= 1) ? i - 1 : 0;
    if (lo + static_cast<std::size_t>(m) > s.size()) lo = s.size() - static_cast<std::size_t>(m);
    return lo;
}

} // namespace

Field TimeSeriesField::at(double t) const {
    const int m = static_cast<int>(std::min<std::size_t>(4, size()));
    std::size_t lo = stencil_start(*this, t, m);
    double w[4];
    lagrange_weights(times.data() + lo, m, t, w, nullptr);
    Field out = frames[lo];
    out *= w[0];
    for (int i = 1; i < m; ++i) out.axpy(w[i], frames[lo + i]);
    return out;
}

Field TimeSeriesField::deriv_at(double t) const {
    const int m = static_cast<int>(std::min<std::size_t>(4, size()));
    std::size_t lo = stencil_start(*this, t, m);
    double wd[4];
    lagrange_weights(times.data() + lo, m, t, nullptr, wd);
    Field out = frames[lo];
    out *= wd[0];
    for (int i = 1; i < m; ++i) out.axpy(wd[i], frames[lo + i]);
    return out;
}

std::vector<double> graded_times(int coarse_nodes,
                                 const std::vector<std::pair<double, double>>& windows,
                                 double fine_dt) {
    std::vector<double> ts;
    for (int i = 0; i < coarse_nodes; ++i)
        ts.push_back(static_cast<double>(i) / (coarse_nodes - 1));
    for (auto [a, b] : windows) {
        a = std::max(0.0, a);
        b = std::min(1.0, b);
        if (b <= a) continue;
        int m = std::max(2, static_cast<int>(std::ceil((b - a) / fine_dt)));
        for (int i = 0; i <= m; ++i) ts.push_back(a + (b - a) * i / m);
    }
    std::sort(ts.begin(), ts.end());
    // Dedup with tolerance relative to the finest spacing requested.
    std::vector<double> out;
    const double tol = 0.25 * fine_dt;
    for (double t : ts)
        if (out.empty() || t - out.back() > tol) out.push_back(t);
    if (out.back() < 1.0 - tol)
        out.push_back(1.0);
    else
        out.back() = 1.0;
    out.front() = 0.0;
    return out;
}

} // namespace wt
