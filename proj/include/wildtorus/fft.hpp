// FFTW-backed c2c transforms with a synchronized plan cache.
#pragma once

#include "wildtorus/field.hpp"
#include "wildtorus/grid.hpp"

#include <complex>
#include <vector>

namespace wt {

// Forward DFT (unnormalized) of every component.
SpectralField fft(const Field& f);

// Inverse DFT, normalized by 1/N, real part taken.
Field ifft(const SpectralField& s, Rank rank);

// In-place transforms on raw complex arrays of size n^d (one component).
void fft_inplace(std::vector<std::complex<double>>& a, int d, int n, bool forward);

} // namespace wt
