#include <doctest.h>

#include <cmath>

#include "fringeproc/metrics.hpp"
#include "fringeproc/rng.hpp"
#include "support.hpp"

using namespace fringe;
using namespace fringe::metrics;

namespace {

OrientationMap random_fo(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  RealImage a(rows, cols);
  for (double& v : a) v = rng.uniform(0.0, kPi);
  return testing::all_valid(std::move(a));
}

OrientationMap shifted(const OrientationMap& fo, double c) {
  OrientationMap out = fo;
  for (double& v : out.angles) v = wrap_pi(v + c);
  return out;
}

}  // namespace

TEST_SUITE("metrics") {
  TEST_CASE("orientation error examples") {
    const auto f = random_fo(32, 32, 1);
    CHECK(orientation_error(f, f) == 0.0);

    // FO + c is compared through the raw difference, so build it without
    // wrapping to keep sin(FO - ref) exactly constant.
    Rng rng(2);
    for (int i = 0; i < 10; ++i) {
      const double c = rng.uniform(-10.0, 10.0);
      OrientationMap g = f;
      for (double& v : g.angles) v += c;
      CHECK(orientation_error(g, f) < 1e-12);
    }

    const OrientationMap fo = testing::all_valid(RealImage(2, 2, std::vector<double>{0, kPi / 2, 0, kPi / 2}));
    const OrientationMap ref = testing::all_valid(RealImage(2, 2, 0.0));
    CHECK(orientation_error(fo, ref) == doctest::Approx(std::sqrt(1.0 / 3.0)).epsilon(1e-12));
    CHECK(orientation_error(fo, ref) == doctest::Approx(0.57735).epsilon(1e-5));
  }

  TEST_CASE("orientation error properties") {
    const auto a = random_fo(24, 24, 3);
    const auto b = random_fo(24, 24, 4);
    const double ab = orientation_error(a, b);
    CHECK(ab >= 0.0);
    CHECK(std::abs(ab - orientation_error(b, a)) < 1e-12);
    // Shifting the difference by pi flips the sine's sign; variance is blind to it.
    OrientationMap a_pi = a;
    for (double& v : a_pi.angles) v += kPi;
    CHECK(std::abs(orientation_error(a_pi, b) - ab) < 1e-12);
    // Wrapping FO + c into [0, pi) flips the sign of sin(diff) on the pixels
    // that wrapped, so the metric sees two clusters at +-sin(c).
    const auto w = shifted(b, 0.7);
    std::size_t wrapped = 0;
    for (std::size_t i = 0; i < w.angles.size(); ++i) wrapped += w.angles[i] < b.angles[i];
    const double n = double(w.angles.size());
    const double p = double(wrapped) / n;
    const double expected = std::sin(0.7) * std::sqrt(4.0 * p * (1.0 - p) * n / (n - 1.0));
    CHECK(orientation_error(w, b) == doctest::Approx(expected).epsilon(1e-9));
  }

  TEST_CASE("orientation error masking and borders") {
    auto a = random_fo(10, 10, 5);
    auto b = random_fo(10, 10, 6);
    a.valid(0, 0) = 0;
    b.valid(9, 9) = 0;
    const auto full = orientation_error_detail(a, b, 0);
    CHECK(full.count == 98);
    CHECK(full.valid_fraction == doctest::Approx(0.98));

    // Oracle: explicit list of the evaluated differences.
    std::vector<double> d;
    for (std::size_t r = 2; r < 8; ++r)
      for (std::size_t c = 2; c < 8; ++c) d.push_back(std::sin(a.angles(r, c) - b.angles(r, c)));
    double mu = 0.0;
    for (double v : d) mu += v;
    mu /= double(d.size());
    double ss = 0.0;
    for (double v : d) ss += (v - mu) * (v - mu);
    CHECK(orientation_error(a, b, 2) == doctest::Approx(std::sqrt(ss / double(d.size() - 1))).epsilon(1e-12));

    CHECK_THROWS_AS(orientation_error(a, b, 5), InvalidArgument);
    CHECK_THROWS_AS(orientation_error(a, random_fo(10, 11, 1)), ShapeError);
    OrientationMap none = a;
    none.valid = Mask(10, 10, 0);
    CHECK_THROWS_AS(orientation_error(none, b), InvalidArgument);
  }

  TEST_CASE("channel rmse") {
    const OrientationEncoding t{testing::random_image(16, 16, 1), testing::random_image(16, 16, 2)};
    const auto zero = rmse_channels(t, t);
    CHECK(zero.rmse_sin == 0.0);
    CHECK(zero.rmse_cos == 0.0);
    auto p = t;
    for (double& v : p.sin2) v += 0.1;
    CHECK(rmse_channels(p, t).rmse_sin == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(rmse_channels(p, t).rmse_cos == 0.0);
    const auto err = sin_error_map(p, t);
    for (double v : err) CHECK(v == doctest::Approx(0.1).epsilon(1e-12));
  }

  TEST_CASE("channel rmse of independent random unit encodings matches sampling") {
    // Independent uniform angles: E[(sin a - sin b)^2] estimated by brute
    // force Monte Carlo on a separate stream.
    const auto enc = [](std::uint64_t seed) {
      Rng rng(seed);
      OrientationEncoding e{RealImage(64, 64), RealImage(64, 64)};
      for (std::size_t i = 0; i < e.sin2.size(); ++i) {
        const double a = rng.uniform(0.0, kTwoPi);
        e.sin2[i] = std::sin(a);
        e.cos2[i] = std::cos(a);
      }
      return e;
    };
    const double got = rmse_channels(enc(10), enc(11)).rmse_sin;
    Rng mc(99);
    double acc = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) acc += std::pow(std::sin(mc.uniform(0.0, kTwoPi)) - std::sin(mc.uniform(0.0, kTwoPi)), 2);
    const double expected = std::sqrt(acc / n);
    CHECK(std::abs(got - expected) / expected < 0.10);
  }

  TEST_CASE("phase rmse") {
    const auto ref = testing::random_image(64, 64, 3);
    RealImage piston = ref;
    for (double& v : piston) v += 3.7;
    CHECK(rmse_phase(piston, ref, 0) < 1e-12);
    CHECK(rmse_phase(ref, ref, 0) == 0.0);

    Rng rng(4);
    for (int i = 0; i < 5; ++i) {
      RealImage p = testing::random_image(64, 64, 10 + i);
      const double base = rmse_phase(p, ref, 3);
      const double c = rng.uniform(-50.0, 50.0);
      for (double& v : p) v += c;
      CHECK(std::abs(rmse_phase(p, ref, 3) - base) < 1e-10);
    }

    // Tilt 0.01 x over x = 0..63: zero-mean ramp RMS = 0.01 * sqrt((n^2 - 1) / 12).
    RealImage tilt = ref;
    for (std::size_t r = 0; r < 64; ++r)
      for (std::size_t c = 0; c < 64; ++c) tilt(r, c) += 0.01 * double(c);
    CHECK(rmse_phase(tilt, ref, 0) == doctest::Approx(0.01 * std::sqrt((64.0 * 64.0 - 1.0) / 12.0)).epsilon(1e-12));
    CHECK_THROWS_AS(rmse_phase(tilt, RealImage(8, 8), 0), ShapeError);
  }

  TEST_CASE("eval report json") {
    EvalReport rep;
    rep.method = "cpfg";
    rep.orientation_error = 0.1;
    rep.excluded_border = 8;
    rep.valid_pixel_fraction = 0.5;
    const auto j = rep.to_json();
    CHECK(j.at("method") == "cpfg");
    CHECK(j.at("orientation_error") == 0.1);
    CHECK(j.at("rmse_phase").is_null());
    CHECK(j.at("excluded_border") == 8);
  }
}
