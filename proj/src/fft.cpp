#include "wildtorus/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <stdexcept>

namespace wt {
namespace {

struct PlanPair {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

std::mutex g_plan_mutex;
std::map<std::pair<int, int>, PlanPair> g_plans;

// Plans are created once per (d, n) with FFTW_UNALIGNED so they can be
// executed on any std::vector buffer via fftw_execute_dft.
PlanPair& plans_for(int d, int n) {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto key = std::make_pair(d, n);
    auto it = g_plans.find(key);
    if (it != g_plans.end()) return it->second;

    std::size_t npts = 1;
    for (int i = 0; i < d; ++i) npts *= static_cast<std::size_t>(n);
    std::vector<std::complex<double>> scratch(npts);
    auto* ptr = reinterpret_cast<fftw_complex*>(scratch.data());
    PlanPair pp;
    if (d == 2) {
        pp.fwd = fftw_plan_dft_2d(n, n, ptr, ptr, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        pp.bwd = fftw_plan_dft_2d(n, n, ptr, ptr, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    } else {
        pp.fwd = fftw_plan_dft_3d(n, n, n, ptr, ptr, FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
        pp.bwd = fftw_plan_dft_3d(n, n, n, ptr, ptr, FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    }
    if (!pp.fwd || !pp.bwd) throw std::runtime_error("fftw plan creation failed");
    return g_plans.emplace(key, pp).first->second;
}

} // namespace

void fft_inplace(std::vector<std::complex<double>>& a, int d, int n, bool forward) {
    PlanPair& pp = plans_for(d, n);
    auto* ptr = reinterpret_cast<fftw_complex*>(a.data());
    fftw_execute_dft(forward ? pp.fwd : pp.bwd, ptr, ptr);
    if (!forward) {
        std::size_t npts = 1;
        for (int i = 0; i < d; ++i) npts *= static_cast<std::size_t>(n);
        const double scale = 1.0 / static_cast<double>(npts);
        for (auto& z : a) z *= scale;
    }
}

SpectralField fft(const Field& f) {
    SpectralField s;
    s.grid = f.grid();
    s.rank = f.rank();
    s.ncomp = f.ncomp();
    const std::size_t np = f.points();
    s.data.resize(static_cast<std::size_t>(s.ncomp) * np);

    std::vector<std::complex<double>> buf(np);
    for (int c = 0; c < s.ncomp; ++c) {
        auto src = f.comp(c);
        for (std::size_t i = 0; i < np; ++i) buf[i] = src[i];
        fft_inplace(buf, s.grid.d, s.grid.n, true);
        std::copy(buf.begin(), buf.end(), s.data.begin() + static_cast<std::size_t>(c) * np);
    }
    return s;
}

Field ifft(const SpectralField& s, Rank rank) {
    Field f(s.grid, rank);
    if (f.ncomp() != s.ncomp) throw std::invalid_argument("ifft: rank/component mismatch");
    const std::size_t np = s.grid.points();
    std::vector<std::complex<double>> buf(np);
    for (int c = 0; c < s.ncomp; ++c) {
        auto src = s.comp(c);
        std::copy(src.begin(), src.end(), buf.begin());
        fft_inplace(buf, s.grid.d, s.grid.n, false);
        auto dst = f.comp(c);
        for (std::size_t i = 0; i < np; ++i) dst[i] = buf[i].real();
    }
    return f;
}

} // namespace wt
