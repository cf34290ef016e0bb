// Right inverses of the tensor divergence on zero-mean data, and the
// oscillation-gap probe for products a(x) f(sigma x).
#pragma once

#include "wildtorus/field.hpp"

namespace wt {

// Symmetric trace-free S with div S = v - mean(v). The mean of v is removed
// internally. Modes with a Nyquist component are zeroed (the multiplier is
// odd and has no consistent real representative there).
Field antidiv_tensor(const Field& v);

// B(v, A) with div B = vA - mean(vA); vA means the vector (vA)_i = v_l A_{li}.
// Requires A to have zero spatial mean; throws otherwise. Products dealiased.
Field bilinear_antidiv(const Field& v, const Field& A);

struct HolderGap {
    double gap = 0.0;   // | ||a f(sigma.)||_p - ||a||_p ||f||_p |
    double bound = 0.0; // sigma^{-1/p} ||a||_{C^1} ||f||_p
};

HolderGap holder_gap(const Field& a, const Field& f, int sigma, double p);

} // namespace wt
