#include "wildtorus/spectral.hpp"

#include "wildtorus/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wt {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Iterate all FFT bins, calling fn(idx, k[]) with signed integer wavenumbers.
template <typename F>
void for_modes(const GridSpec& g, F&& fn) {
    const int n = g.n;
    if (g.d == 2) {
        std::size_t idx = 0;
        for (int m0 = 0; m0 < n; ++m0) {
            const int k0 = wavenumber(m0, n);
            for (int m1 = 0; m1 < n; ++m1, ++idx) {
                int k[3] = {k0, wavenumber(m1, n), 0};
                fn(idx, k);
            }
        }
    } else {
        std::size_t idx = 0;
        for (int m0 = 0; m0 < n; ++m0) {
            const int k0 = wavenumber(m0, n);
            for (int m1 = 0; m1 < n; ++m1) {
                const int k1 = wavenumber(m1, n);
                for (int m2 = 0; m2 < n; ++m2, ++idx) {
                    int k[3] = {k0, k1, wavenumber(m2, n)};
                    fn(idx, k);
                }
            }
        }
    }
}

std::size_t bin_index(const GridSpec& g, const int k[3]) {
    const int n = g.n;
    auto wrap = [n](int k) { return ((k % n) + n) % n; };
    if (g.d == 2) return static_cast<std::size_t>(wrap(k[0])) * n + wrap(k[1]);
    return (static_cast<std::size_t>(wrap(k[0])) * n + wrap(k[1])) * n + wrap(k[2]);
}

// Zero-pad a full c2c spectrum from n to M (M >= n), splitting Nyquist bins.
std::vector<std::complex<double>> pad_spectrum(std::span<const std::complex<double>> src,
                                               const GridSpec& g, int M) {
    const int n = g.n;
    std::size_t npts_big = 1;
    for (int i = 0; i < g.d; ++i) npts_big *= static_cast<std::size_t>(M);
    std::vector<std::complex<double>> out(npts_big, 0.0);

    auto wrapM = [M](int k) { return ((k % M) + M) % M; };
    for_modes(g, [&](std::size_t idx, const int k[3]) {
        std::complex<double> v = src[idx];
        if (v == std::complex<double>(0.0, 0.0)) return;
        // Per-axis target list: |k|<n/2 -> {k}, k==n/2 bin -> {+n/2,-n/2}/2.
        int tk[3][2];
        int cnt[3];
        double w = 1.0;
        for (int a = 0; a < g.d; ++a) {
            if (k[a] == n / 2) {
                tk[a][0] = n / 2;
                tk[a][1] = -n / 2;
                cnt[a] = 2;
                w *= 0.5;
            } else {
                tk[a][0] = k[a];
                cnt[a] = 1;
            }
        }
        int pick[3] = {0, 0, 0};
        while (true) {
            std::size_t bi = 0;
            for (int a = 0; a < g.d; ++a) {
                bi = bi * M + static_cast<std::size_t>(wrapM(tk[a][pick[a]]));
            }
            out[bi] += w * v;
            int a = g.d - 1;
            for (; a >= 0; --a) {
                if (++pick[a] < cnt[a]) break;
                pick[a] = 0;
            }
            if (a < 0) break;
        }
    });
    return out;
}

// Truncate an M-grid spectrum back to n, folding the two Nyquist bins.
void truncate_spectrum(const std::vector<std::complex<double>>& big, const GridSpec& g, int M,
                       std::span<std::complex<double>> dst) {
    const int n = g.n;
    auto wrapM = [M](int k) { return ((k % M) + M) % M; };
    for_modes(g, [&](std::size_t idx, const int k[3]) {
        int sk[3][2];
        int cnt[3];
        for (int a = 0; a < g.d; ++a) {
            if (k[a] == n / 2) {
                sk[a][0] = n / 2;
                sk[a][1] = -n / 2;
                cnt[a] = 2;
            } else {
                sk[a][0] = k[a];
                cnt[a] = 1;
            }
        }
        std::complex<double> acc = 0.0;
        int pick[3] = {0, 0, 0};
        while (true) {
            std::size_t bi = 0;
            for (int a = 0; a < g.d; ++a) bi = bi * M + static_cast<std::size_t>(wrapM(sk[a][pick[a]]));
            acc += big[bi];
            int a = g.d - 1;
            for (; a >= 0; --a) {
                if (++pick[a] < cnt[a]) break;
                pick[a] = 0;
            }
            if (a < 0) break;
        }
        dst[idx] = acc;
    });
}

} // namespace

Field spectral_derivative(const Field& f, const std::array<int, 3>& alpha) {
    int order = 0;
    for (int a = 0; a < 3; ++a) {
        if (alpha[a] < 0) throw std::invalid_argument("spectral_derivative: negative order");
        order += alpha[a];
    }
    if (order > 4) throw std::invalid_argument("spectral_derivative: |alpha| > 4 not supported");
    for (int a = f.grid().d; a < 3; ++a)
        if (alpha[a] != 0) throw std::invalid_argument("spectral_derivative: alpha beyond dimension");

    SpectralField s = fft(f);
    const int n = s.grid.n;
    for (int c = 0; c < s.ncomp; ++c) {
        auto sc = s.comp(c);
        for_modes(s.grid, [&](std::size_t idx, const int k[3]) {
            std::complex<double> m(1.0, 0.0);
            for (int a = 0; a < s.grid.d; ++a) {
                if (alpha[a] == 0) continue;
                if (k[a] == n / 2 && (alpha[a] % 2) == 1) {
                    m = 0.0; // odd derivative has no consistent real Nyquist mode
                    break;
                }
                std::complex<double> ik(0.0, kTwoPi * k[a]);
                for (int r = 0; r < alpha[a]; ++r) m *= ik;
            }
            sc[idx] *= m;
        });
    }
    return ifft(s, f.rank());
}

Field partial(const Field& f, int axis) {
    std::array<int, 3> alpha = {0, 0, 0};
    alpha[axis] = 1;
    return spectral_derivative(f, alpha);
}

Field laplacian(const Field& f) {
    SpectralField s = fft(f);
    for (int c = 0; c < s.ncomp; ++c) {
        auto sc = s.comp(c);
        for_modes(s.grid, [&](std::size_t idx, const int k[3]) {
            double k2 = 0.0;
            for (int a = 0; a < s.grid.d; ++a) k2 += static_cast<double>(k[a]) * k[a];
            sc[idx] *= -kTwoPi * kTwoPi * k2;
        });
    }
    return ifft(s, f.rank());
}

Field inv_laplacian(const Field& f) {
    SpectralField s = fft(f);
    for (int c = 0; c < s.ncomp; ++c) {
        auto sc = s.comp(c);
        for_modes(s.grid, [&](std::size_t idx, const int k[3]) {
            double k2 = 0.0;
            for (int a = 0; a < s.grid.d; ++a) k2 += static_cast<double>(k[a]) * k[a];
            if (k2 == 0.0)
                sc[idx] = 0.0;
            else
                sc[idx] /= -kTwoPi * kTwoPi * k2;
        });
    }
    return ifft(s, f.rank());
}

Field gradient(const Field& f) {
    const int d = f.grid().d;
    if (f.rank() == Rank::scalar) {
        Field g = Field::vector(f.grid());
        for (int a = 0; a < d; ++a) {
            Field da = partial(f, a);
            auto src = da.comp(0);
            auto dst = g.comp(a);
            std::copy(src.begin(), src.end(), dst.begin());
        }
        return g;
    }
    if (f.rank() == Rank::vector) {
        Field g = Field::tensor(f.grid());
        for (int a = 0; a < d; ++a) {
            Field da = partial(f, a);
            for (int j = 0; j < d; ++j) {
                auto src = da.comp(j);
                auto dst = g.comp(a, j);
                std::copy(src.begin(), src.end(), dst.begin());
            }
        }
        return g;
    }
    throw std::invalid_argument("gradient: tensor input unsupported");
}

Field divergence(const Field& f) {
    const int d = f.grid().d;
    if (f.rank() == Rank::vector) {
        Field out = Field::scalar(f.grid());
        for (int a = 0; a < d; ++a) {
            Field tmp(f.grid(), Rank::scalar);
            auto src = f.comp(a);
            auto dst = tmp.comp(0);
            std::copy(src.begin(), src.end(), dst.begin());
            out += partial(tmp, a);
        }
        return out;
    }
    if (f.rank() == Rank::tensor) {
        Field out = Field::vector(f.grid());
        for (int j = 0; j < d; ++j) {
            Field col(f.grid(), Rank::scalar);
            Field acc(f.grid(), Rank::scalar);
            for (int i = 0; i < d; ++i) {
                auto src = f.comp(i, j);
                auto dst = col.comp(0);
                std::copy(src.begin(), src.end(), dst.begin());
                acc += partial(col, i);
            }
            auto src = acc.comp(0);
            auto dst = out.comp(j);
            std::copy(src.begin(), src.end(), dst.begin());
        }
        return out;
    }
    throw std::invalid_argument("divergence: scalar input unsupported");
}

Field leray_project(const Field& v) {
    if (v.rank() != Rank::vector) throw std::invalid_argument("leray_project: vector required");
    SpectralField s = fft(v);
    const int d = s.grid.d;
    const std::size_t np = s.grid.points();
    for_modes(s.grid, [&](std::size_t idx, const int k[3]) {
        double k2 = 0.0;
        for (int a = 0; a < d; ++a) k2 += static_cast<double>(k[a]) * k[a];
        if (k2 == 0.0) {
            for (int a = 0; a < d; ++a) s.data[static_cast<std::size_t>(a) * np + idx] = 0.0;
            return;
        }
        std::complex<double> kdotv = 0.0;
        for (int a = 0; a < d; ++a) kdotv += static_cast<double>(k[a]) * s.data[static_cast<std::size_t>(a) * np + idx];
        for (int a = 0; a < d; ++a)
            s.data[static_cast<std::size_t>(a) * np + idx] -= static_cast<double>(k[a]) * kdotv / k2;
    });
    return ifft(s, Rank::vector);
}

Field heat_semigroup(const Field& f, double t) {
    if (t == 0.0) return f;
    SpectralField s = fft(f);
    const int d = s.grid.d;
    const std::size_t np = s.grid.points();
    for_modes(s.grid, [&](std::size_t idx, const int k[3]) {
        double k2 = 0.0;
        for (int a = 0; a < d; ++a) k2 += static_cast<double>(k[a]) * k[a];
        double m = std::exp(-kTwoPi * kTwoPi * k2 * t);
        for (int c = 0; c < s.ncomp; ++c) s.data[static_cast<std::size_t>(c) * np + idx] *= m;
    });
    return ifft(s, f.rank());
}

Field compute_pressure(const Field& u, const Field& R) {
    Field T = R;
    if (!u.empty() && u.max_abs() > 0.0) T -= outer_product(u, u);
    SpectralField s = fft(T);
    const int d = s.grid.d;
    const std::size_t np = s.grid.points();
    SpectralField p;
    p.grid = s.grid;
    p.rank = Rank::scalar;
    p.ncomp = 1;
    p.data.assign(np, 0.0);
    for_modes(s.grid, [&](std::size_t idx, const int k[3]) {
        double k2 = 0.0;
        for (int a = 0; a < d; ++a) k2 += static_cast<double>(k[a]) * k[a];
        if (k2 == 0.0) return;
        std::complex<double> num = 0.0;
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                num += static_cast<double>(k[i]) * static_cast<double>(k[j]) *
                       s.data[static_cast<std::size_t>(i * d + j) * np + idx];
        p.data[idx] = num / k2;
    });
    return ifft(p, Rank::scalar);
}

int band_limit(const Field& f, double tol) {
    SpectralField s = fft(f);
    double maxmag = 0.0;
    for (const auto& z : s.data) maxmag = std::max(maxmag, std::abs(z));
    if (maxmag == 0.0) return 0;
    int band = 0;
    const std::size_t np = s.grid.points();
    for (int c = 0; c < s.ncomp; ++c) {
        for_modes(s.grid, [&](std::size_t idx, const int k[3]) {
            if (std::abs(s.data[static_cast<std::size_t>(c) * np + idx]) <= tol * maxmag) return;
            int kinf = 0;
            for (int a = 0; a < s.grid.d; ++a) kinf = std::max(kinf, std::abs(k[a]));
            band = std::max(band, kinf);
        });
    }
    return band;
}

Field rescale_spatial(const Field& f, int sigma, double tol) {
    if (sigma < 1) throw std::invalid_argument("rescale_spatial: sigma >= 1 required");
    if (sigma == 1) return f;
    SpectralField s = fft(f);
    const int n = s.grid.n;
    const std::size_t np = s.grid.points();

    double maxmag = 0.0;
    for (const auto& z : s.data) maxmag = std::max(maxmag, std::abs(z));

    SpectralField out;
    out.grid = s.grid;
    out.rank = s.rank;
    out.ncomp = s.ncomp;
    out.data.assign(s.data.size(), 0.0);

    for (int c = 0; c < s.ncomp; ++c) {
        auto sc = s.comp(c);
        for_modes(s.grid, [&](std::size_t idx, const int k[3]) {
            std::complex<double> v = sc[idx];
            if (v == std::complex<double>(0.0, 0.0)) return;
            int kinf = 0;
            for (int a = 0; a < s.grid.d; ++a) kinf = std::max(kinf, std::abs(k[a]));
            if (static_cast<long>(kinf) * sigma > n / 2) {
                if (maxmag > 0.0 && std::abs(v) > tol * maxmag)
                    throw std::runtime_error("rescale_spatial: sigma * band limit exceeds Nyquist");
                return;
            }
            int tk[3] = {k[0] * sigma, k[1] * sigma, k[2] * sigma};
            out.data[static_cast<std::size_t>(c) * np + bin_index(s.grid, tk)] += v;
        });
    }
    return ifft(out, f.rank());
}

Field dealiased_map(const std::vector<const Field*>& inputs, Rank out_rank,
                    const std::function<void(const double* in, double* out)>& fn) {
    if (inputs.empty()) throw std::invalid_argument("dealiased_map: no inputs");
    const GridSpec g = inputs[0]->grid();
    for (const Field* f : inputs)
        if (f->grid() != g) throw std::invalid_argument("dealiased_map: grid mismatch");

    const int M = 3 * g.n / 2;
    std::size_t npts_big = 1;
    for (int i = 0; i < g.d; ++i) npts_big *= static_cast<std::size_t>(M);

    // Transform every input component to the padded physical grid.
    int total_in = 0;
    for (const Field* f : inputs) total_in += f->ncomp();
    std::vector<std::vector<double>> phys(total_in);
    {
        int slot = 0;
        for (const Field* f : inputs) {
            SpectralField s = fft(*f);
            // The padded inverse divides by the big grid size, but the spectrum
            // carries small-grid scaling; compensate so phys holds true values.
            const double comp = static_cast<double>(npts_big) / static_cast<double>(g.points());
            for (int c = 0; c < f->ncomp(); ++c, ++slot) {
                std::vector<std::complex<double>> big = pad_spectrum(s.comp(c), g, M);
                fft_inplace(big, g.d, M, false);
                phys[slot].resize(npts_big);
                for (std::size_t i = 0; i < npts_big; ++i) phys[slot][i] = comp * big[i].real();
            }
        }
    }

    const int out_ncomp = rank_components(out_rank, g.d);
    std::vector<std::vector<double>> out_phys(out_ncomp, std::vector<double>(npts_big));
    {
        std::vector<double> in_vals(total_in), out_vals(out_ncomp);
        for (std::size_t p = 0; p < npts_big; ++p) {
            for (int c = 0; c < total_in; ++c) in_vals[c] = phys[c][p];
            fn(in_vals.data(), out_vals.data());
            for (int c = 0; c < out_ncomp; ++c) out_phys[c][p] = out_vals[c];
        }
    }

    Field result(g, out_rank);
    std::vector<std::complex<double>> big(npts_big);
    const std::size_t np = g.points();
    std::vector<std::complex<double>> small(np);
    for (int c = 0; c < out_ncomp; ++c) {
        for (std::size_t i = 0; i < npts_big; ++i) big[i] = out_phys[c][i];
        fft_inplace(big, g.d, M, true);
        const double scale = static_cast<double>(np) / static_cast<double>(npts_big);
        for (auto& z : big) z *= scale; // renormalize unnormalized forward FFT
        truncate_spectrum(big, g, M, small);
        fft_inplace(small, g.d, g.n, false);
        auto dst = result.comp(c);
        for (std::size_t i = 0; i < np; ++i) dst[i] = small[i].real();
    }
    return result;
}

Field multiply(const Field& a, const Field& b_scalar) {
    if (b_scalar.rank() != Rank::scalar) throw std::invalid_argument("multiply: scalar second arg");
    const int na = a.ncomp();
    return dealiased_map({&a, &b_scalar}, a.rank(), [na](const double* in, double* out) {
        for (int c = 0; c < na; ++c) out[c] = in[c] * in[na];
    });
}

Field outer_product(const Field& u, const Field& v) {
    if (u.rank() != Rank::vector || v.rank() != Rank::vector)
        throw std::invalid_argument("outer_product: vectors required");
    const int d = u.grid().d;
    return dealiased_map({&u, &v}, Rank::tensor, [d](const double* in, double* out) {
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) out[i * d + j] = in[i] * in[d + j];
    });
}

Field outer_product_traceless(const Field& u, const Field& v) {
    if (u.rank() != Rank::vector || v.rank() != Rank::vector)
        throw std::invalid_argument("outer_product_traceless: vectors required");
    const int d = u.grid().d;
    return dealiased_map({&u, &v}, Rank::tensor, [d](const double* in, double* out) {
        double dot = 0.0;
        for (int a = 0; a < d; ++a) dot += in[a] * in[d + a];
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j)
                out[i * d + j] = in[i] * in[d + j] - (i == j ? dot / d : 0.0);
    });
}

Field contract_gradient(const Field& gradA, const Field& T) {
    if (gradA.rank() != Rank::vector || T.rank() != Rank::tensor)
        throw std::invalid_argument("contract_gradient: (vector, tensor) required");
    const int d = T.grid().d;
    return dealiased_map({&gradA, &T}, Rank::vector, [d](const double* in, double* out) {
        for (int j = 0; j < d; ++j) {
            double s = 0.0;
            for (int i = 0; i < d; ++i) s += in[i] * in[d + i * d + j];
            out[j] = s;
        }
    });
}

Field deviatoric(const Field& S) {
    if (S.rank() != Rank::tensor) throw std::invalid_argument("deviatoric: tensor required");
    Field out = S;
    const int d = S.grid().d;
    const std::size_t np = S.points();
    for (std::size_t p = 0; p < np; ++p) {
        double tr = 0.0;
        for (int i = 0; i < d; ++i) tr += out.comp(i, i)[p];
        tr /= d;
        for (int i = 0; i < d; ++i) out.comp(i, i)[p] -= tr;
    }
    return out;
}

Field symmetrize(const Field& S) {
    if (S.rank() != Rank::tensor) throw std::invalid_argument("symmetrize: tensor required");
    Field out = S;
    const int d = S.grid().d;
    const std::size_t np = S.points();
    for (int i = 0; i < d; ++i)
        for (int j = i + 1; j < d; ++j) {
            auto a = out.comp(i, j);
            auto b = out.comp(j, i);
            for (std::size_t p = 0; p < np; ++p) {
                double m = 0.5 * (a[p] + b[p]);
                a[p] = m;
                b[p] = m;
            }
        }
    return out;
}

double trace_max(const Field& S) {
    const int d = S.grid().d;
    const std::size_t np = S.points();
    double m = 0.0;
    for (std::size_t p = 0; p < np; ++p) {
        double tr = 0.0;
        for (int i = 0; i < d; ++i) tr += S.comp(i, i)[p];
        m = std::max(m, std::abs(tr));
    }
    return m;
}

} // namespace wt
