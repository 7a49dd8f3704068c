#include "fringeproc/filters.hpp"

#include <algorithm>
#include <cmath>

namespace fringe {

GradientPair gradients(const RealImage& img) {
  const std::size_t rows = img.rows();
  const std::size_t cols = img.cols();
  GradientPair g{RealImage(rows, cols), RealImage(rows, cols)};
  if (rows == 0 || cols == 0) return g;

  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (cols == 1) {
        g.gx(r, c) = 0.0;
      } else if (c == 0) {
        g.gx(r, c) = img(r, 1) - img(r, 0);
      } else if (c == cols - 1) {
        g.gx(r, c) = img(r, c) - img(r, c - 1);
      } else {
        g.gx(r, c) = 0.5 * (img(r, c + 1) - img(r, c - 1));
      }

      if (rows == 1) {
        g.gy(r, c) = 0.0;
      } else if (r == 0) {
        g.gy(r, c) = img(1, c) - img(0, c);
      } else if (r == rows - 1) {
        g.gy(r, c) = img(r, c) - img(r - 1, c);
      } else {
        g.gy(r, c) = 0.5 * (img(r + 1, c) - img(r - 1, c));
      }
    }
  }
  return g;
}

std::vector<double> gaussian_kernel(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgument("gaussian_kernel: sigma must be positive");
  }
  const int radius = static_cast<int>(std::ceil(4.0 * sigma));
  std::vector<double> taps(2 * radius + 1);
  double sum = 0.0;
  for (int k = -radius; k <= radius; ++k) {
    const double v = std::exp(-0.5 * (k * k) / (sigma * sigma));
    taps[k + radius] = v;
    sum += v;
  }
  for (double& t : taps) t /= sum;
  return taps;
}

namespace {

// Half-sample symmetric extension (d c b a | a b c d | d c b a), repeated
// for kernels wider than the image.
long reflect_index(long i, long n) {
  const long period = 2 * n;
  long m = i % period;
  if (m < 0) m += period;
  return m < n ? m : period - 1 - m;
}

}  // namespace

RealImage gaussian_blur(const RealImage& img, double sigma) {
  const auto taps = gaussian_kernel(sigma);
  const int radius = static_cast<int>(taps.size() / 2);
  const auto rows = static_cast<long>(img.rows());
  const auto cols = static_cast<long>(img.cols());

  RealImage tmp(img.rows(), img.cols());
  for (long r = 0; r < rows; ++r) {
    for (long c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        const long cc = reflect_index(c + k, cols);
        acc += taps[k + radius] * img(r, cc);
      }
      tmp(r, c) = acc;
    }
  }
  RealImage out(img.rows(), img.cols());
  for (long r = 0; r < rows; ++r) {
    for (long c = 0; c < cols; ++c) {
      double acc = 0.0;
      for (int k = -radius; k <= radius; ++k) {
        const long rr = reflect_index(r + k, rows);
        acc += taps[k + radius] * tmp(rr, c);
      }
      out(r, c) = acc;
    }
  }
  return out;
}

RealImage box_mean(const RealImage& img, int w) {
  if (w < 1) throw InvalidArgument("box_mean: window must be >= 1");
  const long lo = -static_cast<long>((w - 1) / 2);
  const long hi = lo + w - 1;
  const auto rows = static_cast<long>(img.rows());
  const auto cols = static_cast<long>(img.cols());
  RealImage out(img.rows(), img.cols());
  for (long r = 0; r < rows; ++r) {
    const long r0 = std::max(0L, r + lo);
    const long r1 = std::min(rows - 1, r + hi);
    for (long c = 0; c < cols; ++c) {
      const long c0 = std::max(0L, c + lo);
      const long c1 = std::min(cols - 1, c + hi);
      double acc = 0.0;
      for (long rr = r0; rr <= r1; ++rr)
        for (long cc = c0; cc <= c1; ++cc) acc += img(rr, cc);
      out(r, c) = acc / static_cast<double>((r1 - r0 + 1) * (c1 - c0 + 1));
    }
  }
  return out;
}

}  // namespace fringe
