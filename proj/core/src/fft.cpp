#include "fringeproc/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <mutex>

namespace fringe {
namespace {

// FFTW planning is not thread-safe; execution on distinct arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

ComplexImage transform(const ComplexImage& img, int sign) {
  ComplexImage out(img.rows(), img.cols());
  if (img.empty()) return out;

  const auto n = img.size();
  auto* in_buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  auto* out_buf = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n));
  if (in_buf == nullptr || out_buf == nullptr) {
    fftw_free(in_buf);
    fftw_free(out_buf);
    throw std::bad_alloc();
  }

  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_2d(static_cast<int>(img.rows()), static_cast<int>(img.cols()), in_buf,
                            out_buf, sign, FFTW_ESTIMATE);
  }
  static_assert(sizeof(std::complex<double>) == sizeof(fftw_complex));
  std::memcpy(in_buf, img.values().data(), sizeof(fftw_complex) * n);
  fftw_execute(plan);
  std::memcpy(out.values().data(), out_buf, sizeof(fftw_complex) * n);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(in_buf);
  fftw_free(out_buf);
  return out;
}

}  // namespace

ComplexImage fft2(const ComplexImage& img) { return transform(img, FFTW_FORWARD); }

ComplexImage ifft2(const ComplexImage& img) {
  ComplexImage out = transform(img, FFTW_BACKWARD);
  const double scale = 1.0 / static_cast<double>(img.size());
  for (auto& v : out) v *= scale;
  return out;
}

}  // namespace fringe
