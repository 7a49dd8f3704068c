#pragma once

#include "fringeproc/image.hpp"

namespace fringe {

// Exact-size 2D DFT (no implicit padding). Forward is unnormalized,
// inverse carries the 1/(rows*cols) factor, so ifft2(fft2(x)) == x.
//
// Bin (r, c) holds signed frequency (f_row, f_col) with
//   f = k        for k < (n + 1) / 2
//   f = k - n    otherwise (the Nyquist bin of an even axis is negative)
// i.e. DC sits at (0, 0) and the layout matches numpy.fft.fftfreq(n) * n.
ComplexImage fft2(const ComplexImage& img);
ComplexImage ifft2(const ComplexImage& img);

// Signed frequency index of bin k on an axis of length n.
inline long signed_frequency(std::size_t k, std::size_t n) noexcept {
  return k < (n + 1) / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n);
}

}  // namespace fringe
