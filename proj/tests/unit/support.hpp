#pragma once

#include <atomic>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <unistd.h>

#include "fringeproc/image.hpp"
#include "fringeproc/maps.hpp"

namespace testing {

// Scratch directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("fringeproc_" + tag + "_" + std::to_string(::getpid()) + "_" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline fringe::RealImage random_image(std::size_t rows, std::size_t cols, std::uint64_t seed,
                                      double lo = -1.0, double hi = 1.0) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(lo, hi);
  fringe::RealImage img(rows, cols);
  for (double& v : img) v = dist(gen);
  return img;
}

// Angular distance on a circle of the given period.
inline double circ(double a, double b, double period) {
  double d = std::fmod(std::abs(a - b), period);
  return std::min(d, period - d);
}

inline fringe::OrientationMap all_valid(fringe::RealImage angles) {
  fringe::Mask valid(angles.rows(), angles.cols(), 1);
  return {std::move(angles), std::move(valid)};
}

}  // namespace testing
