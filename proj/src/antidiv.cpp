#include "wildtorus/antidiv.hpp"

#include "wildtorus/fft.hpp"
#include "wildtorus/norms.hpp"
#include "wildtorus/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wt {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Multiplier m_{ijk}(xi) with xi = 2 pi k, acting as S_ij = m_{ijk} v_k:
//   m_{ijk} = a * (-i xi_i xi_j xi_k / |xi|^4)
//           + b * (-i xi_k / |xi|^2) delta_ij
//           +     (-i xi_i / |xi|^2) delta_jk
//           +     (-i xi_j / |xi|^2) delta_ik
// with a = (2-d)/(d-1), b = -1/(d-1). These are the unique coefficients for
// which div S = v - mean(v) and tr S = 0 hold in every dimension.
void apply_antidiv(const SpectralField& v, SpectralField& S) {
    const GridSpec& g = v.grid;
    const int d = g.d;
    const int n = g.n;
    const std::size_t np = g.points();
    const double a = (2.0 - d) / (d - 1.0);
    const double b = -1.0 / (d - 1.0);

    S.grid = g;
    S.rank = Rank::tensor;
    S.ncomp = d * d;
    S.data.assign(static_cast<std::size_t>(d) * d * np, 0.0);

    auto visit = [&](std::size_t idx, const int k[3]) {
        double xi[3] = {kTwoPi * k[0], kTwoPi * k[1], kTwoPi * k[2]};
        double xi2 = 0.0;
        bool nyq = false;
        for (int ax = 0; ax < d; ++ax) {
            xi2 += xi[ax] * xi[ax];
            if (k[ax] == n / 2 || k[ax] == -n / 2) nyq = true;
        }
        if (xi2 == 0.0 || nyq) return; // zero mode and Nyquist modes -> 0
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
                std::complex<double> acc = 0.0;
                for (int kk = 0; kk < d; ++kk) {
                    double re = a * xi[i] * xi[j] * xi[kk] / (xi2 * xi2);
                    if (i == j) re += b * xi[kk] / xi2;
                    if (j == kk) re += xi[i] / xi2;
                    if (i == kk) re += xi[j] / xi2;
                    std::complex<double> m(0.0, -re);
                    acc += m * v.data[static_cast<std::size_t>(kk) * np + idx];
                }
                S.data[static_cast<std::size_t>(i * d + j) * np + idx] = acc;
            }
    };

    if (d == 2) {
        std::size_t idx = 0;
        for (int m0 = 0; m0 < n; ++m0) {
            int k0 = wavenumber(m0, n);
            for (int m1 = 0; m1 < n; ++m1, ++idx) {
                int k[3] = {k0, wavenumber(m1, n), 0};
                visit(idx, k);
            }
        }
    } else {
        std::size_t idx = 0;
        for (int m0 = 0; m0 < n; ++m0) {
            int k0 = wavenumber(m0, n);
            for (int m1 = 0; m1 < n; ++m1) {
                int k1 = wavenumber(m1, n);
                for (int m2 = 0; m2 < n; ++m2, ++idx) {
                    int k[3] = {k0, k1, wavenumber(m2, n)};
                    visit(idx, k);
                }
            }
        }
    }
}

} // namespace

Field antidiv_tensor(const Field& v) {
    if (v.rank() != Rank::vector) throw std::invalid_argument("antidiv_tensor: vector required");
    SpectralField vs = fft(v);
    SpectralField S;
    apply_antidiv(vs, S);
    return ifft(S, Rank::tensor);
}

Field bilinear_antidiv(const Field& v, const Field& A) {
    if (v.rank() != Rank::vector || A.rank() != Rank::tensor)
        throw std::invalid_argument("bilinear_antidiv: (vector, tensor) required");
    if (v.grid() != A.grid()) throw std::invalid_argument("bilinear_antidiv: grid mismatch");
    const int d = A.grid().d;
    {
        double m = 0.0;
        for (double mu : A.means()) m = std::max(m, std::abs(mu));
        if (m > 1e-10 * std::max(A.max_abs(), 1e-300))
            throw std::invalid_argument("bilinear_antidiv: A must have zero spatial mean");
    }

    // Z^{(l)} = R(A_{l,:}) for each row l of A.
    std::vector<Field> Z;
    Z.reserve(d);
    for (int l = 0; l < d; ++l) {
        Field row = Field::vector(A.grid());
        for (int k = 0; k < d; ++k) {
            auto src = A.comp(l, k);
            auto dst = row.comp(k);
            std::copy(src.begin(), src.end(), dst.begin());
        }
        Z.push_back(antidiv_tensor(row));
    }

    // First term: sum_l v_l Z^{(l)}, dealiased.
    std::vector<const Field*> in;
    in.push_back(&v);
    for (const Field& z : Z) in.push_back(&z);
    Field first = dealiased_map(in, Rank::tensor, [d](const double* x, double* out) {
        // layout: x[0..d) = v, then d blocks of d*d tensor values
        for (int c = 0; c < d * d; ++c) {
            double s = 0.0;
            for (int l = 0; l < d; ++l) s += x[l] * x[d + l * d * d + c];
            out[c] = s;
        }
    });

    // w_j = sum_{i,l} (d_i v_l) Z^{(l)}_{ij}, dealiased; second term = R(w).
    Field gv = gradient(v); // (grad v)_il = d_i v_l
    std::vector<const Field*> in2;
    in2.push_back(&gv);
    for (const Field& z : Z) in2.push_back(&z);
    Field w = dealiased_map(in2, Rank::vector, [d](const double* x, double* out) {
        // x[0..d*d) = grad v (i*d + l), then d blocks of tensors (i*d + j)
        for (int j = 0; j < d; ++j) {
            double s = 0.0;
            for (int i = 0; i < d; ++i)
                for (int l = 0; l < d; ++l) s += x[i * d + l] * x[d * d + l * d * d + i * d + j];
            out[j] = s;
        }
    });
    first -= antidiv_tensor(w);
    return first;
}

HolderGap holder_gap(const Field& a, const Field& f, int sigma, double p) {
    if (a.rank() != Rank::scalar || f.rank() != Rank::scalar)
        throw std::invalid_argument("holder_gap: scalar fields required");
    if (sigma < 1) throw std::invalid_argument("holder_gap: sigma >= 1 required");
    Field fs = rescale_spatial(f, sigma); // throws on Nyquist violation
    Field prod = multiply(a, fs);
    double np_f = lp_norm(f, p);
    HolderGap out;
    out.gap = std::abs(lp_norm(prod, p) - lp_norm(a, p) * np_f);
    out.bound = std::pow(static_cast<double>(sigma), -1.0 / p) * c1_norm(a) * np_f;
    return out;
}

} // namespace wt
