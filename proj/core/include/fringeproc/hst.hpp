#pragma once

#include <complex>
#include <string>
#include <vector>

#include "fringeproc/image.hpp"
#include "fringeproc/maps.hpp"

namespace fringe::hst {

// S(u, v) = (u + i v) / sqrt(u^2 + v^2), S(0, 0) = 0.
std::complex<double> spiral_value(long u, long v) noexcept;

// Spiral sampled on the fft2 bin grid. Bin (r, c) carries
// S(-k(r, rows), -k(c, cols)) with k the signed frequency index, so u runs
// against the row (y) frequency and v against the column (x) frequency.
// With that orientation the quadrature below reproduces -b sin(phi) for the
// direction convention beta = atan2(dphi/dx, dphi/dy).
struct SpiralFilter {
  ComplexImage values;

  std::size_t rows() const noexcept { return values.rows(); }
  std::size_t cols() const noexcept { return values.cols(); }
};

SpiralFilter make_spiral_filter(std::size_t rows, std::size_t cols);

// |mean| above this fraction of the RMS triggers a non-zero-mean warning.
inline constexpr double kMeanWarningRatio = 0.05;

// s_H = Re(-i exp(-i beta) ifft2(S fft2(s))). Appends a message to
// `warnings` (when given) if s is visibly not zero-mean.
RealImage quadrature(const RealImage& s, const DirectionMap& beta,
                     std::vector<std::string>* warnings = nullptr);

// Values in [-pi, pi); `masked` flags pixels where s^2 + s_H^2 < 1e-12,
// whose phase is set to 0.
struct WrappedPhase {
  RealImage phase;
  Mask masked;

  std::size_t masked_count() const noexcept;
};

inline constexpr double kMinQuadratureEnergy = 1e-12;

// phi = atan2(-s_H, s).
WrappedPhase demodulate_phase(const RealImage& s, const RealImage& s_h);

struct Demodulation {
  WrappedPhase wrapped;
  RealImage unwrapped;  // mean removed
  std::vector<std::string> warnings;
};

// quadrature -> demodulate_phase -> unwrap_phase_2d -> piston removal.
Demodulation demodulate(const RealImage& fringe, const DirectionMap& beta);

}  // namespace fringe::hst
