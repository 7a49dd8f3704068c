#include "fringeproc/maps.hpp"

#include <algorithm>
#include <cmath>

namespace fringe {

double OrientationMap::valid_fraction() const noexcept {
  if (valid.empty()) return 0.0;
  std::size_t n = 0;
  for (auto v : valid) n += v ? 1 : 0;
  return static_cast<double>(n) / static_cast<double>(valid.size());
}

double wrap_to(double angle, double period) noexcept {
  double r = std::fmod(angle, period);
  if (r < 0.0) r += period;
  if (r >= period) r = 0.0;
  return r;
}

double wrap_signed(double a) noexcept {
  double r = wrap_to(a + kPi, kTwoPi) - kPi;
  if (r >= kPi) r -= kTwoPi;
  return r;
}

double circular_distance(double a, double b, double period) noexcept {
  const double d = wrap_to(a - b, period);
  return std::min(d, period - d);
}

}  // namespace fringe
