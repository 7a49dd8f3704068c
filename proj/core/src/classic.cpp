#include "fringeproc/classic.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fringeproc/fft.hpp"
#include "fringeproc/filters.hpp"

namespace fringe::classic {
namespace {

constexpr double kAmplitudeEps = 1e-6;

}  // namespace

void WindowSpec::validate_for(const RealImage& img) const {
  if (w < 2) throw InvalidArgument("window side must be >= 2, got " + std::to_string(w));
  const auto limit = std::min(img.rows(), img.cols()) / 2;
  if (static_cast<std::size_t>(w) > limit) {
    throw InvalidArgument("window side " + std::to_string(w) + " exceeds half the image side (" +
                          std::to_string(limit) + ")");
  }
}

RealImage prefilter(const RealImage& img, double background_sigma, double smooth_sigma) {
  require_finite(img, "prefilter");
  if (!(background_sigma > 0.0) || !(smooth_sigma > 0.0)) {
    throw InvalidArgument("prefilter: sigmas must be positive");
  }
  const auto background = gaussian_blur(img, background_sigma);
  RealImage s(img.rows(), img.cols());
  RealImage magnitude(img.rows(), img.cols());
  for (std::size_t i = 0; i < img.size(); ++i) {
    s[i] = img[i] - background[i];
    magnitude[i] = std::abs(s[i]);
  }
  const auto envelope = gaussian_blur(magnitude, background_sigma);
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] /= std::max(kAmplitudeEps, envelope[i] * kPi / 2.0);
  }
  return gaussian_blur(s, smooth_sigma);
}

double dominant_period(const RealImage& img) {
  require_finite(img, "dominant_period");
  const double m = mean(img);
  ComplexImage centered(img.rows(), img.cols());
  for (std::size_t i = 0; i < img.size(); ++i) centered[i] = img[i] - m;
  const auto spectrum = fft2(centered);

  double best = -1.0;
  double best_freq = 0.0;
  for (std::size_t r = 0; r < img.rows(); ++r) {
    const double fr = static_cast<double>(signed_frequency(r, img.rows())) /
                      static_cast<double>(img.rows());
    for (std::size_t c = 0; c < img.cols(); ++c) {
      if (r == 0 && c == 0) continue;
      const double fc = static_cast<double>(signed_frequency(c, img.cols())) /
                        static_cast<double>(img.cols());
      const double power = std::norm(spectrum(r, c));
      if (power > best) {
        best = power;
        best_freq = std::hypot(fr, fc);
      }
    }
  }
  if (best_freq <= 0.0) return static_cast<double>(std::max(img.rows(), img.cols()));
  return 1.0 / best_freq;
}

PrefilterParams default_prefilter_params(const RealImage& img) {
  PrefilterParams p;
  p.background_sigma = 2.0 * dominant_period(img);
  p.smooth_sigma = 0.5;
  return p;
}

RealImage prefilter(const RealImage& img) {
  const auto p = default_prefilter_params(img);
  return prefilter(img, p.background_sigma, p.smooth_sigma);
}

OrientationMap doubled_angle_orientation(const GradientPair& g, const WindowSpec& win) {
  require_same_shape(g.gx, g.gy, "doubled_angle_orientation");
  RealImage c2(g.gx.rows(), g.gx.cols());
  RealImage s2(g.gx.rows(), g.gx.cols());
  for (std::size_t i = 0; i < c2.size(); ++i) {
    const double gx = g.gx[i];
    const double gy = g.gy[i];
    c2[i] = gy * gy - gx * gx;
    s2[i] = 2.0 * gx * gy;
  }
  const auto c_avg = box_mean(c2, win.w);
  const auto s_avg = box_mean(s2, win.w);

  OrientationMap fo{RealImage(c2.rows(), c2.cols()), Mask(c2.rows(), c2.cols(), 0)};
  for (std::size_t i = 0; i < c2.size(); ++i) {
    if (std::hypot(c_avg[i], s_avg[i]) < kMinAveragedMagnitude) continue;
    fo.angles[i] = wrap_pi(0.5 * std::atan2(s_avg[i], c_avg[i]));
    fo.valid[i] = 1;
  }
  return fo;
}

OrientationMap gradient_orientation(const RealImage& img, const WindowSpec& win) {
  require_estimator_input(img, "gradient_orientation");
  win.validate_for(img);
  return doubled_angle_orientation(gradients(img), win);
}

GradientPair plane_fit_gradients(const RealImage& img, const WindowSpec& win) {
  require_estimator_input(img, "plane_fit_gradients");
  win.validate_for(img);
  const long lo = -static_cast<long>((win.w - 1) / 2);
  const long hi = lo + win.w - 1;
  const auto rows = static_cast<long>(img.rows());
  const auto cols = static_cast<long>(img.cols());

  GradientPair g{RealImage(img.rows(), img.cols()), RealImage(img.rows(), img.cols())};
  for (long r = 0; r < rows; ++r) {
    const long r0 = std::max(0L, r + lo);
    const long r1 = std::min(rows - 1, r + hi);
    for (long c = 0; c < cols; ++c) {
      const long c0 = std::max(0L, c + lo);
      const long c1 = std::min(cols - 1, c + hi);
      const double n = static_cast<double>((r1 - r0 + 1) * (c1 - c0 + 1));
      const double xm = 0.5 * static_cast<double>(c0 + c1);
      const double ym = 0.5 * static_cast<double>(r0 + r1);
      double im = 0.0;
      for (long rr = r0; rr <= r1; ++rr)
        for (long cc = c0; cc <= c1; ++cc) im += img(rr, cc);
      im /= n;

      // Centered normal equations for (p1, p2); p0 decouples.
      double sxx = 0.0, syy = 0.0, sxy = 0.0, sxi = 0.0, syi = 0.0;
      for (long rr = r0; rr <= r1; ++rr) {
        const double dy = static_cast<double>(rr) - ym;
        for (long cc = c0; cc <= c1; ++cc) {
          const double dx = static_cast<double>(cc) - xm;
          const double di = img(rr, cc) - im;
          sxx += dx * dx;
          syy += dy * dy;
          sxy += dx * dy;
          sxi += dx * di;
          syi += dy * di;
        }
      }
      const double det = sxx * syy - sxy * sxy;
      if (std::abs(det) < 1e-12) continue;
      g.gx(r, c) = (syy * sxi - sxy * syi) / det;
      g.gy(r, c) = (sxx * syi - sxy * sxi) / det;
    }
  }
  return g;
}

OrientationMap cpfg_orientation(const RealImage& img, const WindowSpec& win) {
  return doubled_angle_orientation(plane_fit_gradients(img, win), win);
}

}  // namespace fringe::classic
