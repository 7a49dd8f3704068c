#include <doctest.h>

#include <cmath>

#include "fringeproc/classic.hpp"
#include "fringeproc/filters.hpp"
#include "fringeproc/metrics.hpp"
#include "fringeproc/simulate.hpp"
#include "support.hpp"

using namespace fringe;
using namespace fringe::classic;
using testing::circ;

namespace {

RealImage carrier_fringe(std::size_t n, double period, double theta) {
  return sim::render_fringe(sim::gen_carrier(n, n, {period, theta}));
}

double max_interior_error(const OrientationMap& fo, double expected, std::size_t border) {
  double worst = 0.0;
  const auto in = interior(fo.rows(), fo.cols(), border);
  for (std::size_t r = in.r0; r < in.r1; ++r)
    for (std::size_t c = in.c0; c < in.c1; ++c) {
      if (!fo.valid(r, c)) return 1e9;
      worst = std::max(worst, circ(fo.angles(r, c), expected, kPi));
    }
  return worst;
}

}  // namespace

TEST_SUITE("orientclassic") {
  TEST_CASE("window validation") {
    const RealImage img(16, 20);
    CHECK_THROWS_AS(WindowSpec{1}.validate_for(img), InvalidArgument);
    CHECK_THROWS_AS(WindowSpec{9}.validate_for(img), InvalidArgument);
    CHECK_NOTHROW(WindowSpec{8}.validate_for(img));
    CHECK_THROWS_AS(gradient_orientation(RealImage(6, 6), {2}), InvalidArgument);
  }

  TEST_CASE("prefilter") {
    const auto fringe = carrier_fringe(128, 14.0, 0.4);
    const auto out = prefilter(fringe);
    CHECK(std::abs(mean(out)) < 0.05);

    RealImage shifted = fringe;
    for (double& v : shifted) v += 5.0;
    const auto p = default_prefilter_params(fringe);
    CHECK(p.background_sigma == doctest::Approx(28.0).epsilon(0.1));
    const auto a = prefilter(fringe, p.background_sigma, p.smooth_sigma);
    const auto b = prefilter(shifted, p.background_sigma, p.smooth_sigma);
    double ss = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) ss += (a[i] - b[i]) * (a[i] - b[i]);
    CHECK(std::sqrt(ss / double(a.size())) < 0.05);

    for (double v : prefilter(RealImage(32, 32, 2.0), 4.0, 0.5)) CHECK(std::abs(v) < 1e-9);
    CHECK(dominant_period(fringe) == doctest::Approx(14.0).epsilon(0.1));
  }

  TEST_CASE("gradient method on a carrier, transposition and constants") {
    const auto fringe = carrier_fringe(64, 14.0, 0.0);
    const auto fo = gradient_orientation(fringe, {2});
    CHECK(max_interior_error(fo, kPi / 2, 1) < 0.02);

    const auto oblique = carrier_fringe(64, 11.0, 0.7);
    const auto fo1 = gradient_orientation(oblique, {2});
    const auto fo2 = gradient_orientation(transpose(oblique), {2});
    for (std::size_t r = 1; r < 63; ++r)
      for (std::size_t c = 1; c < 63; ++c) {
        REQUIRE(fo1.valid(r, c));
        CHECK(circ(fo2.angles(c, r), kPi / 2 - fo1.angles(r, c), kPi) < 1e-12);
      }

    CHECK(gradient_orientation(RealImage(16, 16, 0.3), {2}).valid_fraction() == 0.0);
    CHECK(cpfg_orientation(RealImage(16, 16, 0.3), {2}).valid_fraction() == 0.0);
  }

  TEST_CASE("plane fit recovers planes exactly") {
    RealImage plane(20, 24);
    for (std::size_t r = 0; r < 20; ++r)
      for (std::size_t c = 0; c < 24; ++c) plane(r, c) = 2.0 * double(c) + 3.0 * double(r) + 1.0;
    for (int w : {2, 3, 4, 5}) {
      const auto g = plane_fit_gradients(plane, {w});
      for (std::size_t r = 0; r < 20; ++r)
        for (std::size_t c = 0; c < 24; ++c) {
          // A w = 2 window clipped at the last row/column is a single line of
          // pixels; the fit is then singular and reports zero.
          const bool degenerate = w == 2 && (r == 19 || c == 23);
          if (degenerate) continue;
          CHECK(std::abs(g.gx(r, c) - 2.0) < 1e-9);
          CHECK(std::abs(g.gy(r, c) - 3.0) < 1e-9);
        }
    }
    const auto g2 = plane_fit_gradients(plane, {2});
    CHECK(g2.gx(19, 23) == 0.0);
    CHECK(g2.gy(19, 23) == 0.0);

    const auto flat = plane_fit_gradients(RealImage(12, 12, 7.0), {3});
    for (std::size_t i = 0; i < flat.gx.size(); ++i) {
      CHECK(std::abs(flat.gx[i]) < 1e-12);
      CHECK(std::abs(flat.gy[i]) < 1e-12);
    }
  }

  TEST_CASE("plane fit follows central differences on a carrier") {
    // A symmetric (odd) window estimates the slope at the same pixel the
    // central difference does.
    const auto fringe = carrier_fringe(64, 20.0, 0.5);
    const auto fit = plane_fit_gradients(fringe, {3});
    const auto cd = gradients(fringe);
    double num = 0.0, den = 0.0;
    for (std::size_t r = 2; r < 62; ++r)
      for (std::size_t c = 2; c < 62; ++c) {
        const std::size_t i = r * 64 + c;
        num += std::pow(fit.gx[i] - cd.gx[i], 2) + std::pow(fit.gy[i] - cd.gy[i], 2);
        den += cd.gx[i] * cd.gx[i] + cd.gy[i] * cd.gy[i];
      }
    CHECK(std::sqrt(num / den) < 0.10);
  }

  TEST_CASE("both estimators on carriers over a theta grid") {
    for (double period : {8.0, 14.0, 32.0}) {
      for (int k = 0; k < 8; ++k) {
        const double theta = k * kPi / 8.0;
        INFO("period " << period << " theta " << theta);
        const auto phase = sim::gen_carrier(64, 64, {period, theta});
        const auto gt = sim::ground_truth_orientation(phase);
        const auto pre = prefilter(sim::render_fringe(phase));
        const double oe_g = metrics::orientation_error(gradient_orientation(pre, {2}), gt, 8);
        const double oe_c = metrics::orientation_error(cpfg_orientation(pre, {2}), gt, 8);
        CHECK(oe_g < 0.02);
        CHECK(oe_c < 0.02);
        for (const auto& fo : {gradient_orientation(pre, {2}), cpfg_orientation(pre, {2})})
          for (std::size_t i = 0; i < fo.angles.size(); ++i)
            if (fo.valid[i]) CHECK((fo.angles[i] >= 0.0 && fo.angles[i] < kPi));
      }
    }
  }

  TEST_CASE("cpfg is error free on the unmodulated carrier") {
    const auto phase = sim::gen_peaks_phase(128, 128, 0.0);
    const auto full = sim::gen_carrier(128, 128, {14.0, 0.0});
    RealImage total = phase;
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += full[i];
    const auto gt = sim::ground_truth_orientation(total);
    const auto fo = cpfg_orientation(prefilter(sim::render_fringe(total)), {2});
    CHECK(metrics::orientation_error(fo, gt, 8) < 1e-3);
  }

  TEST_CASE("larger windows help under noise") {
    const auto phase = sim::gen_carrier(128, 128, {14.0, 0.3});
    const auto gt = sim::ground_truth_orientation(phase);
    double oe2 = 0.0, oe4 = 0.0;
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const auto noisy = sim::add_gaussian_noise(sim::render_fringe(phase), 0.1, seed);
      const auto pre = prefilter(noisy);
      oe2 += metrics::orientation_error(cpfg_orientation(pre, {2}), gt, 8);
      oe4 += metrics::orientation_error(cpfg_orientation(pre, {4}), gt, 8);
    }
    CHECK(oe4 < oe2);
  }

  TEST_CASE("negating the fringe leaves orientation unchanged") {
    const auto phase = sim::gen_peaks_phase(64, 64, 2.0);
    auto fringe = sim::render_fringe(phase);
    const auto fo = cpfg_orientation(fringe, {2});
    for (double& v : fringe) v = -v;
    const auto fo_neg = cpfg_orientation(fringe, {2});
    const auto g = gradient_orientation(fringe, {2});
    const auto g_pos = gradient_orientation(sim::render_fringe(phase), {2});
    for (std::size_t r = 1; r < 63; ++r)
      for (std::size_t c = 1; c < 63; ++c) {
        if (!fo.valid(r, c)) continue;
        CHECK(circ(fo.angles(r, c), fo_neg.angles(r, c), kPi) < 1e-6);
        CHECK(circ(g.angles(r, c), g_pos.angles(r, c), kPi) < 1e-6);
      }
  }

  TEST_CASE("cpfg and gradient method agree on planar input") {
    RealImage plane(32, 32);
    for (std::size_t r = 0; r < 32; ++r)
      for (std::size_t c = 0; c < 32; ++c) plane(r, c) = 0.3 * double(c) - 0.8 * double(r);
    const auto a = gradient_orientation(plane, {3});
    const auto b = cpfg_orientation(plane, {3});
    for (std::size_t i = 0; i < a.angles.size(); ++i) {
      REQUIRE(a.valid[i]);
      REQUIRE(b.valid[i]);
      CHECK(circ(a.angles[i], b.angles[i], kPi) < 1e-9);
    }
  }
}
