#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "fringeproc/image.hpp"
#include "fringeproc/maps.hpp"
#include "fringeproc/rng.hpp"

namespace fringe::sim {

// Unwrapped phase in radians.
using PhaseMap = RealImage;

struct CarrierSpec {
  double period = 14.0;  // pixels per fringe, > 2
  double theta = 0.0;    // radians, [0, pi)

  void validate() const;
};

struct GaussianKernelSpec {
  double cx = 0.0;  // column
  double cy = 0.0;  // row
  double sigma = 1.0;
  double amplitude = 0.0;  // radians, signed
};

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

// Random ranges used by the generators.
struct PhaseRanges {
  long kernel_count_min = 1;
  long kernel_count_max = 50;
  Range sigma_fraction{0.05, 0.25};  // of min(rows, cols)
  Range amplitude{-8.0, 8.0};
  Range period{8.0, 32.0};
  Range theta{0.0, kPi};

  void validate() const;
};

RealImage render_gaussian_kernels(std::size_t rows, std::size_t cols,
                                  std::span<const GaussianKernelSpec> kernels);

std::vector<GaussianKernelSpec> draw_gaussian_kernels(std::size_t rows, std::size_t cols,
                                                      Rng& rng, const PhaseRanges& ranges);

// Sum of 2D Gaussians with a kernel count drawn uniformly from the ranges.
PhaseMap gen_object_phase_gaussians(std::size_t rows, std::size_t cols, std::uint64_t seed,
                                    const PhaseRanges& ranges = {});

// The classic peaks surface on X, Y in [-3, 3]; X follows columns, Y rows.
double peaks(double x, double y) noexcept;
PhaseMap gen_peaks_phase(std::size_t rows, std::size_t cols, double coeff);

// phi(x, y) = (x cos(theta) + y sin(theta)) * 2 pi / T at integer pixels.
PhaseMap gen_carrier(std::size_t rows, std::size_t cols, const CarrierSpec& carrier);
CarrierSpec draw_carrier(Rng& rng, const PhaseRanges& ranges);

// Union of 1-5 random ellipses, blurred with sigma 3 px. Values in [0, 1].
RealImage gen_blob_mask(std::size_t rows, std::size_t cols, std::uint64_t seed);
PhaseMap gen_blob_mask_phase(std::size_t rows, std::size_t cols, std::uint64_t seed,
                             double amplitude);

// I = cos(phi).
RealImage render_fringe(const PhaseMap& phase);

RealImage add_gaussian_noise(const RealImage& img, double stddev, std::uint64_t seed);

// Gradient magnitude (|gx| + |gy|) below which an angle is undefined.
inline constexpr double kDegenerateGradient = 1e-9;

// FO = atan2(dphi/dx, dphi/dy) mod pi.
OrientationMap ground_truth_orientation(const PhaseMap& phase);
// beta = atan2(dphi/dx, dphi/dy) mod 2 pi.
DirectionMap ground_truth_direction(const PhaseMap& phase);

// Invalid pixels encode as (0, 1).
OrientationEncoding encode_orientation(const OrientationMap& fo);
// FO = atan2(s, c) / 2 in [0, pi); s^2 + c^2 < 1e-6 is marked invalid.
OrientationMap decode_orientation(const OrientationEncoding& enc);

inline constexpr double kMinEncodingNorm2 = 1e-6;

}  // namespace fringe::sim
