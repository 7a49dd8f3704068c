#include "fringeproc/hst.hpp"

#include <cmath>
#include <sstream>

#include "fringeproc/fft.hpp"
#include "fringeproc/unwrap.hpp"

namespace fringe::hst {

std::complex<double> spiral_value(long u, long v) noexcept {
  if (u == 0 && v == 0) return {0.0, 0.0};
  const auto du = static_cast<double>(u);
  const auto dv = static_cast<double>(v);
  const double norm = std::hypot(du, dv);
  return {du / norm, dv / norm};
}

SpiralFilter make_spiral_filter(std::size_t rows, std::size_t cols) {
  if (rows < kMinEstimatorSide || cols < kMinEstimatorSide) {
    throw InvalidArgument("make_spiral_filter: both sides must be at least 8");
  }
  SpiralFilter f{ComplexImage(rows, cols)};
  for (std::size_t r = 0; r < rows; ++r) {
    const long u = -signed_frequency(r, rows);
    for (std::size_t c = 0; c < cols; ++c) {
      f.values(r, c) = spiral_value(u, -signed_frequency(c, cols));
    }
  }
  return f;
}

RealImage quadrature(const RealImage& s, const DirectionMap& beta,
                     std::vector<std::string>* warnings) {
  require_same_shape(s, beta.angles, "quadrature");
  require_finite(s, "quadrature input");
  const auto filter = make_spiral_filter(s.rows(), s.cols());

  if (warnings != nullptr) {
    const double mu = mean(s);
    double ss = 0.0;
    for (double v : s) ss += v * v;
    const double rms = std::sqrt(ss / static_cast<double>(s.size()));
    if (std::abs(mu) > kMeanWarningRatio * rms) {
      std::ostringstream msg;
      msg << "quadrature input is not zero-mean (mean " << mu << ", rms " << rms << ")";
      warnings->push_back(msg.str());
    }
  }

  ComplexImage spectrum = fft2(to_complex(s));
  for (std::size_t i = 0; i < spectrum.size(); ++i) spectrum[i] *= filter.values[i];
  const ComplexImage v = ifft2(spectrum);

  RealImage out(s.rows(), s.cols());
  const std::complex<double> minus_i{0.0, -1.0};
  for (std::size_t i = 0; i < out.size(); ++i) {
    const std::complex<double> rot = std::polar(1.0, -beta.angles[i]);
    out[i] = (minus_i * rot * v[i]).real();
  }
  return out;
}

std::size_t WrappedPhase::masked_count() const noexcept {
  std::size_t n = 0;
  for (auto m : masked) n += m != 0;
  return n;
}

WrappedPhase demodulate_phase(const RealImage& s, const RealImage& s_h) {
  require_same_shape(s, s_h, "demodulate_phase");
  WrappedPhase out{RealImage(s.rows(), s.cols(), 0.0), Mask(s.rows(), s.cols(), 0)};
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] * s[i] + s_h[i] * s_h[i] < kMinQuadratureEnergy) {
      out.masked[i] = 1;
      continue;
    }
    out.phase[i] = wrap_signed(std::atan2(-s_h[i], s[i]));
  }
  return out;
}

Demodulation demodulate(const RealImage& fringe, const DirectionMap& beta) {
  Demodulation d;
  const RealImage s_h = quadrature(fringe, beta, &d.warnings);
  d.wrapped = demodulate_phase(fringe, s_h);
  d.unwrapped = unwrap::unwrap_phase_2d(d.wrapped.phase);
  const double mu = mean(d.unwrapped);
  for (double& v : d.unwrapped) v -= mu;
  return d;
}

}  // namespace fringe::hst
