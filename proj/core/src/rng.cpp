#include "fringeproc/rng.hpp"

#include <algorithm>
#include <cmath>

#include "fringeproc/maps.hpp"

namespace fringe {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) noexcept {
  return splitmix64(base + 0x9E3779B97F4A7C15ULL * (index + 1));
}

long Rng::uniform_int(long lo, long hi) {
  if (hi <= lo) return lo;
  const auto span = static_cast<double>(hi - lo + 1);
  const auto k = static_cast<long>(std::floor(uniform() * span));
  return lo + std::min(k, hi - lo);
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  spare_ = radius * std::sin(kTwoPi * u2);
  has_spare_ = true;
  return radius * std::cos(kTwoPi * u2);
}

}  // namespace fringe
