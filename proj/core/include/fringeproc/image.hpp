#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "fringeproc/errors.hpp"

namespace fringe {

// Dense row-major 2D grid. x is the column index (increasing rightward),
// y the row index (increasing downward); every angle formula in the library
// uses this convention.
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;

  Grid(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

  Grid(std::size_t rows, std::size_t cols, std::vector<T> values)
      : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (values_.size() != rows_ * cols_) {
      throw ShapeError("grid: value count does not match rows*cols");
    }
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  T& operator()(std::size_t r, std::size_t c) noexcept { return values_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const noexcept {
    return values_[r * cols_ + c];
  }

  T& operator[](std::size_t i) noexcept { return values_[i]; }
  const T& operator[](std::size_t i) const noexcept { return values_[i]; }

  std::span<T> values() noexcept { return values_; }
  std::span<const T> values() const noexcept { return values_; }

  auto begin() noexcept { return values_.begin(); }
  auto end() noexcept { return values_.end(); }
  auto begin() const noexcept { return values_.begin(); }
  auto end() const noexcept { return values_.end(); }

  template <typename U>
  bool same_shape(const Grid<U>& other) const noexcept {
    return rows_ == other.rows() && cols_ == other.cols();
  }

  friend bool operator==(const Grid& a, const Grid& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> values_;
};

using RealImage = Grid<double>;
using ComplexImage = Grid<std::complex<double>>;
using Mask = Grid<std::uint8_t>;

struct GradientPair {
  RealImage gx;  // d/dx, along columns
  RealImage gy;  // d/dy, along rows
};

// Smallest side accepted by the estimators.
inline constexpr std::size_t kMinEstimatorSide = 8;

bool all_finite(const RealImage& img) noexcept;

// Throws InvalidArgument naming `what` when a sample is NaN/Inf.
void require_finite(const RealImage& img, std::string_view what);

// Finite and at least kMinEstimatorSide on both axes.
void require_estimator_input(const RealImage& img, std::string_view what);

template <typename T, typename U>
void require_same_shape(const Grid<T>& a, const Grid<U>& b, std::string_view what) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(what) + ": dimension mismatch (" + std::to_string(a.rows()) +
                     "x" + std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                     std::to_string(b.cols()) + ")");
  }
}

RealImage transpose(const RealImage& img);
ComplexImage to_complex(const RealImage& img);
RealImage real_part(const ComplexImage& img);

double mean(const RealImage& img) noexcept;

// Interior view bounds after removing `border` pixels on each side; empty
// when the border swallows the image.
struct Interior {
  std::size_t r0 = 0, r1 = 0, c0 = 0, c1 = 0;
  bool contains(std::size_t r, std::size_t c) const noexcept {
    return r >= r0 && r < r1 && c >= c0 && c < c1;
  }
  std::size_t count() const noexcept { return (r1 - r0) * (c1 - c0); }
};

Interior interior(std::size_t rows, std::size_t cols, std::size_t border) noexcept;

}  // namespace fringe
