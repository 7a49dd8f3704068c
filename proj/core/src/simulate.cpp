#include "fringeproc/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fringeproc/filters.hpp"

namespace fringe::sim {

void CarrierSpec::validate() const {
  if (!(period > 2.0) || !std::isfinite(period)) {
    throw InvalidArgument("carrier period must exceed 2 px, got " + std::to_string(period));
  }
  if (!(theta >= 0.0 && theta < kPi)) {
    throw InvalidArgument("carrier theta must lie in [0, pi), got " + std::to_string(theta));
  }
}

void PhaseRanges::validate() const {
  if (kernel_count_min < 0 || kernel_count_max < kernel_count_min || kernel_count_max > 50) {
    throw InvalidArgument("kernel count range must satisfy 0 <= min <= max <= 50");
  }
  if (!(sigma_fraction.lo > 0.0) || sigma_fraction.hi < sigma_fraction.lo) {
    throw InvalidArgument("sigma range must be positive and ordered");
  }
  if (amplitude.hi < amplitude.lo) throw InvalidArgument("amplitude range is not ordered");
  if (!(period.lo > 2.0) || period.hi < period.lo) {
    throw InvalidArgument("period range must stay above 2 px and be ordered");
  }
  if (theta.lo < 0.0 || theta.hi > kPi || theta.hi < theta.lo) {
    throw InvalidArgument("theta range must lie within [0, pi]");
  }
}

RealImage render_gaussian_kernels(std::size_t rows, std::size_t cols,
                                  std::span<const GaussianKernelSpec> kernels) {
  RealImage phase(rows, cols, 0.0);
  for (const auto& k : kernels) {
    if (!(k.sigma > 0.0)) throw InvalidArgument("gaussian kernel sigma must be positive");
    const double inv = 1.0 / (2.0 * k.sigma * k.sigma);
    for (std::size_t r = 0; r < rows; ++r) {
      const double dy = static_cast<double>(r) - k.cy;
      for (std::size_t c = 0; c < cols; ++c) {
        const double dx = static_cast<double>(c) - k.cx;
        phase(r, c) += k.amplitude * std::exp(-(dx * dx + dy * dy) * inv);
      }
    }
  }
  return phase;
}

std::vector<GaussianKernelSpec> draw_gaussian_kernels(std::size_t rows, std::size_t cols,
                                                      Rng& rng, const PhaseRanges& ranges) {
  ranges.validate();
  const long count = rng.uniform_int(ranges.kernel_count_min, ranges.kernel_count_max);
  const double side = static_cast<double>(std::min(rows, cols));
  std::vector<GaussianKernelSpec> kernels;
  kernels.reserve(static_cast<std::size_t>(count));
  for (long i = 0; i < count; ++i) {
    GaussianKernelSpec k;
    k.cx = rng.uniform(0.0, static_cast<double>(cols - 1));
    k.cy = rng.uniform(0.0, static_cast<double>(rows - 1));
    k.sigma = side * rng.uniform(ranges.sigma_fraction.lo, ranges.sigma_fraction.hi);
    k.amplitude = rng.uniform(ranges.amplitude.lo, ranges.amplitude.hi);
    kernels.push_back(k);
  }
  return kernels;
}

PhaseMap gen_object_phase_gaussians(std::size_t rows, std::size_t cols, std::uint64_t seed,
                                    const PhaseRanges& ranges) {
  Rng rng(seed);
  const auto kernels = draw_gaussian_kernels(rows, cols, rng, ranges);
  return render_gaussian_kernels(rows, cols, kernels);
}

double peaks(double x, double y) noexcept {
  return 3.0 * (1.0 - x) * (1.0 - x) * std::exp(-x * x - (y + 1.0) * (y + 1.0)) -
         10.0 * (x / 5.0 - x * x * x - std::pow(y, 5)) * std::exp(-x * x - y * y) -
         (1.0 / 3.0) * std::exp(-(x + 1.0) * (x + 1.0) - y * y);
}

PhaseMap gen_peaks_phase(std::size_t rows, std::size_t cols, double coeff) {
  PhaseMap phase(rows, cols);
  auto axis = [](std::size_t i, std::size_t n) {
    return n < 2 ? 0.0 : -3.0 + 6.0 * static_cast<double>(i) / static_cast<double>(n - 1);
  };
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      phase(r, c) = coeff * peaks(axis(c, cols), axis(r, rows));
  return phase;
}

PhaseMap gen_carrier(std::size_t rows, std::size_t cols, const CarrierSpec& carrier) {
  carrier.validate();
  const double kx = std::cos(carrier.theta) * kTwoPi / carrier.period;
  const double ky = std::sin(carrier.theta) * kTwoPi / carrier.period;
  PhaseMap phase(rows, cols);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      phase(r, c) = static_cast<double>(c) * kx + static_cast<double>(r) * ky;
  return phase;
}

CarrierSpec draw_carrier(Rng& rng, const PhaseRanges& ranges) {
  CarrierSpec spec;
  spec.period = rng.uniform(ranges.period.lo, ranges.period.hi);
  spec.theta = rng.uniform(ranges.theta.lo, ranges.theta.hi);
  if (spec.theta >= kPi) spec.theta = 0.0;
  return spec;
}

RealImage gen_blob_mask(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  RealImage mask(rows, cols, 0.0);
  const double side = static_cast<double>(std::min(rows, cols));
  const long count = rng.uniform_int(1, 5);
  for (long e = 0; e < count; ++e) {
    const double cx = rng.uniform(0.2, 0.8) * static_cast<double>(cols);
    const double cy = rng.uniform(0.2, 0.8) * static_cast<double>(rows);
    const double ax = rng.uniform(0.05, 0.25) * side;
    const double ay = rng.uniform(0.05, 0.25) * side;
    const double rot = rng.uniform(0.0, kPi);
    const double cr = std::cos(rot);
    const double sr = std::sin(rot);
    for (std::size_t r = 0; r < rows; ++r) {
      for (std::size_t c = 0; c < cols; ++c) {
        const double dx = static_cast<double>(c) - cx;
        const double dy = static_cast<double>(r) - cy;
        const double u = (cr * dx + sr * dy) / ax;
        const double v = (-sr * dx + cr * dy) / ay;
        if (u * u + v * v <= 1.0) mask(r, c) = 1.0;
      }
    }
  }
  return gaussian_blur(mask, 3.0);
}

PhaseMap gen_blob_mask_phase(std::size_t rows, std::size_t cols, std::uint64_t seed,
                             double amplitude) {
  if (amplitude < 0.0) throw InvalidArgument("blob amplitude must be non-negative");
  PhaseMap phase = gen_blob_mask(rows, cols, seed);
  for (auto& v : phase) v *= amplitude;
  return phase;
}

RealImage render_fringe(const PhaseMap& phase) {
  RealImage out(phase.rows(), phase.cols());
  for (std::size_t i = 0; i < phase.size(); ++i) out[i] = std::cos(phase[i]);
  return out;
}

RealImage add_gaussian_noise(const RealImage& img, double stddev, std::uint64_t seed) {
  if (!(stddev >= 0.0)) throw InvalidArgument("noise std must be non-negative");
  RealImage out = img;
  if (stddev == 0.0) return out;
  Rng rng(seed);
  for (auto& v : out) v += stddev * rng.normal();
  return out;
}

OrientationMap ground_truth_orientation(const PhaseMap& phase) {
  const auto g = gradients(phase);
  OrientationMap fo{RealImage(phase.rows(), phase.cols()), Mask(phase.rows(), phase.cols(), 0)};
  for (std::size_t i = 0; i < phase.size(); ++i) {
    if (std::abs(g.gx[i]) + std::abs(g.gy[i]) < kDegenerateGradient) continue;
    fo.angles[i] = wrap_pi(std::atan2(g.gx[i], g.gy[i]));
    fo.valid[i] = 1;
  }
  return fo;
}

DirectionMap ground_truth_direction(const PhaseMap& phase) {
  const auto g = gradients(phase);
  DirectionMap beta{RealImage(phase.rows(), phase.cols())};
  for (std::size_t i = 0; i < phase.size(); ++i) {
    beta.angles[i] = wrap_2pi(std::atan2(g.gx[i], g.gy[i]));
  }
  return beta;
}

OrientationEncoding encode_orientation(const OrientationMap& fo) {
  OrientationEncoding enc{RealImage(fo.rows(), fo.cols(), 0.0),
                          RealImage(fo.rows(), fo.cols(), 1.0)};
  for (std::size_t i = 0; i < fo.angles.size(); ++i) {
    if (!fo.valid[i]) continue;
    enc.sin2[i] = std::sin(2.0 * fo.angles[i]);
    enc.cos2[i] = std::cos(2.0 * fo.angles[i]);
  }
  return enc;
}

OrientationMap decode_orientation(const OrientationEncoding& enc) {
  require_same_shape(enc.sin2, enc.cos2, "decode_orientation");
  OrientationMap fo{RealImage(enc.rows(), enc.cols()), Mask(enc.rows(), enc.cols(), 0)};
  for (std::size_t i = 0; i < enc.sin2.size(); ++i) {
    const double s = enc.sin2[i];
    const double c = enc.cos2[i];
    if (s * s + c * c < kMinEncodingNorm2) continue;
    fo.angles[i] = wrap_pi(0.5 * std::atan2(s, c));
    fo.valid[i] = 1;
  }
  return fo;
}

}  // namespace fringe::sim
