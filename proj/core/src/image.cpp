#include "fringeproc/image.hpp"

#include <cmath>
#include <string>

namespace fringe {

const char* to_string(FormatErrc code) noexcept {
  switch (code) {
    case FormatErrc::bad_magic:
      return "bad magic";
    case FormatErrc::version_mismatch:
      return "version mismatch";
    case FormatErrc::truncated:
      return "truncated payload";
    case FormatErrc::non_finite:
      return "non-finite sample";
    case FormatErrc::shape_audit:
      return "shape audit failed";
    case FormatErrc::config_mismatch:
      return "config mismatch";
    case FormatErrc::malformed:
      return "malformed";
  }
  return "format error";
}

bool all_finite(const RealImage& img) noexcept {
  for (double v : img) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

void require_finite(const RealImage& img, std::string_view what) {
  if (!all_finite(img)) {
    throw InvalidArgument(std::string(what) + ": image contains non-finite samples");
  }
}

void require_estimator_input(const RealImage& img, std::string_view what) {
  if (img.rows() < kMinEstimatorSide || img.cols() < kMinEstimatorSide) {
    throw InvalidArgument(std::string(what) + ": image must be at least 8x8, got " +
                          std::to_string(img.rows()) + "x" + std::to_string(img.cols()));
  }
  require_finite(img, what);
}

RealImage transpose(const RealImage& img) {
  RealImage out(img.cols(), img.rows());
  for (std::size_t r = 0; r < img.rows(); ++r)
    for (std::size_t c = 0; c < img.cols(); ++c) out(c, r) = img(r, c);
  return out;
}

ComplexImage to_complex(const RealImage& img) {
  ComplexImage out(img.rows(), img.cols());
  for (std::size_t i = 0; i < img.size(); ++i) out[i] = img[i];
  return out;
}

RealImage real_part(const ComplexImage& img) {
  RealImage out(img.rows(), img.cols());
  for (std::size_t i = 0; i < img.size(); ++i) out[i] = img[i].real();
  return out;
}

double mean(const RealImage& img) noexcept {
  if (img.empty()) return 0.0;
  double sum = 0.0;
  for (double v : img) sum += v;
  return sum / static_cast<double>(img.size());
}

Interior interior(std::size_t rows, std::size_t cols, std::size_t border) noexcept {
  Interior in;
  if (2 * border >= rows || 2 * border >= cols) return in;
  in.r0 = border;
  in.r1 = rows - border;
  in.c0 = border;
  in.c1 = cols - border;
  return in;
}

}  // namespace fringe
