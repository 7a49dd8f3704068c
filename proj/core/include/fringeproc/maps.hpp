#pragma once

#include "fringeproc/image.hpp"

namespace fringe {

// Fringe orientation modulo pi. Valid angles lie in [0, pi); pixels with a
// degenerate gradient carry valid == 0 and an angle of 0.
struct OrientationMap {
  RealImage angles;
  Mask valid;

  std::size_t rows() const noexcept { return angles.rows(); }
  std::size_t cols() const noexcept { return angles.cols(); }
  double valid_fraction() const noexcept;
};

// Fringe direction modulo 2*pi, every angle in [0, 2*pi).
struct DirectionMap {
  RealImage angles;

  std::size_t rows() const noexcept { return angles.rows(); }
  std::size_t cols() const noexcept { return angles.cols(); }
};

// (sin 2FO, cos 2FO): the network's target and output representation.
struct OrientationEncoding {
  RealImage sin2;
  RealImage cos2;

  std::size_t rows() const noexcept { return sin2.rows(); }
  std::size_t cols() const noexcept { return sin2.cols(); }
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

// Reduce into [0, period). Guards the case where fmod rounding lands on the
// period itself.
double wrap_to(double angle, double period) noexcept;
inline double wrap_pi(double a) noexcept { return wrap_to(a, kPi); }
inline double wrap_2pi(double a) noexcept { return wrap_to(a, kTwoPi); }

// Wrap into [-pi, pi).
double wrap_signed(double a) noexcept;

// Smallest angular distance between two angles on a circle of `period`.
double circular_distance(double a, double b, double period) noexcept;

}  // namespace fringe
