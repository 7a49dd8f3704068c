#include <doctest.h>

#include <cmath>

#include "fringeproc/simulate.hpp"
#include "fringeproc/unwrap.hpp"
#include "support.hpp"

using namespace fringe;
using namespace fringe::unwrap;
using testing::circ;

namespace {

RealImage wrapped_copy(const RealImage& phase) {
  RealImage w = phase;
  for (double& v : w) v = wrap_signed(v);
  return w;
}

// Max deviation of `got` from `truth` after removing the best constant
// (taken at pixel 0, then checked everywhere).
double max_dev_up_to_constant(const RealImage& got, const RealImage& truth) {
  const double offset = got[0] - truth[0];
  double worst = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i)
    worst = std::max(worst, std::abs(got[i] - truth[i] - offset));
  return worst;
}

OrientationMap orientation_from(const DirectionMap& beta) {
  RealImage fo = beta.angles;
  for (double& v : fo) v = wrap_pi(v);
  return testing::all_valid(std::move(fo));
}

// Max over interior pixels of the circular error, minimized over the two
// global branches.
double branch_error(const DirectionMap& got, const DirectionMap& truth, std::size_t border,
                    const Mask* valid = nullptr) {
  double worst[2] = {0.0, 0.0};
  const auto in = interior(got.rows(), got.cols(), border);
  for (std::size_t r = in.r0; r < in.r1; ++r)
    for (std::size_t c = in.c0; c < in.c1; ++c) {
      if (valid != nullptr && !(*valid)(r, c)) continue;
      for (int b = 0; b < 2; ++b)
        worst[b] = std::max(worst[b],
                            circ(got.angles(r, c), truth.angles(r, c) + b * kPi, kTwoPi));
    }
  return std::min(worst[0], worst[1]);
}

}  // namespace

TEST_SUITE("orientunwrap") {
  TEST_CASE("smooth input passes through unchanged") {
    const auto img = testing::random_image(24, 24, 1, -1.4, 1.4);
    CHECK(unwrap_phase_2d(img) == img);
  }

  TEST_CASE("wrapped ramp is recovered") {
    RealImage ramp(64, 64);
    for (std::size_t r = 0; r < 64; ++r)
      for (std::size_t c = 0; c < 64; ++c) ramp(r, c) = 0.1 * double(c);
    const auto out = unwrap_phase_2d(wrapped_copy(ramp));
    CHECK(max_dev_up_to_constant(out, ramp) < 1e-6);

    RealImage oblique(40, 50);
    for (std::size_t r = 0; r < 40; ++r)
      for (std::size_t c = 0; c < 50; ++c) oblique(r, c) = 0.9 * double(c) - 1.3 * double(r);
    CHECK(max_dev_up_to_constant(unwrap_phase_2d(wrapped_copy(oblique)), oblique) < 1e-6);
  }

  TEST_CASE("wrapped peaks phase is recovered") {
    const auto phase = sim::gen_peaks_phase(256, 256, 5.0);
    const auto out = unwrap_phase_2d(wrapped_copy(phase));
    CHECK(max_dev_up_to_constant(out, phase) < 1e-6);
  }

  TEST_CASE("output stays congruent to the input and keeps the anchor") {
    const auto noise = testing::random_image(48, 40, 7, -kPi, kPi);
    const auto out = unwrap_phase_2d(noise);
    double worst = 0.0;
    for (std::size_t i = 0; i < noise.size(); ++i) {
      const double k = (out[i] - noise[i]) / kTwoPi;
      worst = std::max(worst, std::abs(k - std::round(k)) * kTwoPi);
    }
    CHECK(worst < 1e-9);

    const auto rel = reliability_map(noise);
    std::size_t anchor = 0;
    for (std::size_t i = 1; i < rel.size(); ++i)
      if (rel[i] > rel[anchor]) anchor = i;
    CHECK(out[anchor] == noise[anchor]);
    for (double v : rel) CHECK((std::isfinite(v) && v >= 0.0));
    CHECK(rel(0, 5) == 0.0);
  }

  TEST_CASE("constant orientation gives a constant direction") {
    const auto fo = testing::all_valid(RealImage(16, 16, kPi / 2));
    const auto d = orientation_to_direction(fo);
    const double first = d.angles[0];
    CHECK((circ(first, kPi / 2, kTwoPi) < 1e-12 || circ(first, 3 * kPi / 2, kTwoPi) < 1e-12));
    for (double v : d.angles) CHECK(v == first);
  }

  TEST_CASE("peaks direction recovered up to one global branch") {
    for (double a : {2.0, 5.0}) {
      const auto phase = sim::gen_peaks_phase(512, 512, a);
      const auto fo = sim::ground_truth_orientation(phase);
      const auto truth = sim::ground_truth_direction(phase);
      const auto d = orientation_to_direction(fo);
      CHECK(branch_error(d, truth, 1, &fo.valid) < 1e-6);
    }
  }

  TEST_CASE("step lines in FO disappear") {
    DirectionMap beta{RealImage(48, 64)};
    for (std::size_t r = 0; r < 48; ++r)
      for (std::size_t c = 0; c < 64; ++c)
        beta.angles(r, c) = wrap_2pi(0.3 + 0.05 * double(c) + 0.02 * double(r));
    const auto fo = orientation_from(beta);
    // The input really has a modulo-pi jump.
    bool has_step = false;
    for (std::size_t c = 0; c + 1 < 64; ++c)
      has_step |= std::abs(fo.angles(10, c + 1) - fo.angles(10, c)) > 1.0;
    CHECK(has_step);
    const auto d = orientation_to_direction(fo);
    CHECK(branch_error(d, beta, 0) < 1e-9);
    for (std::size_t r = 0; r < 48; ++r)
      for (std::size_t c = 0; c + 1 < 64; ++c)
        CHECK(circ(d.angles(r, c + 1), d.angles(r, c), kTwoPi) < 0.1);
  }

  TEST_CASE("direction recovery is idempotent") {
    const auto phase = sim::gen_object_phase_gaussians(64, 64, 3);
    RealImage total = phase;
    const auto carrier = sim::gen_carrier(64, 64, {12.0, 0.8});
    for (std::size_t i = 0; i < total.size(); ++i) total[i] += carrier[i];
    const auto d1 = orientation_to_direction(sim::ground_truth_orientation(total));
    const auto d2 = orientation_to_direction(orientation_from(d1));
    for (std::size_t i = 0; i < d1.angles.size(); ++i)
      CHECK(circ(d1.angles[i], d2.angles[i], kTwoPi) < 1e-9);
  }

  TEST_CASE("coverage guard and inpainting") {
    auto fo = testing::all_valid(RealImage(10, 10, 1.0));
    for (std::size_t c = 0; c < 2; ++c) fo.valid(5, c) = 0;
    try {
      orientation_to_direction(fo);
      FAIL("coverage 98% accepted");
    } catch (const NumericalError& e) {
      CHECK(std::string(e.what()).find("98") != std::string::npos);
    }
    fo.valid(5, 1) = 1;
    CHECK_NOTHROW(orientation_to_direction(fo));

    auto holes = testing::all_valid(RealImage(3, 4, 0.0));
    holes.angles(0, 0) = 0.5;
    holes.angles(2, 3) = 2.0;
    holes.valid = Mask(3, 4, 0);
    holes.valid(0, 0) = 1;
    holes.valid(2, 3) = 1;
    const auto filled = inpaint_nearest(holes);
    CHECK(filled(0, 1) == 0.5);
    CHECK(filled(1, 0) == 0.5);
    CHECK(filled(2, 2) == 2.0);
    CHECK(filled(1, 3) == 2.0);
    CHECK_THROWS_AS(inpaint_nearest(OrientationMap{RealImage(4, 4), Mask(4, 4, 0)}),
                    NumericalError);
  }

  TEST_CASE("branch canonicalization") {
    const auto beta = sim::ground_truth_direction(sim::gen_carrier(32, 32, {10.0, 0.6}));
    auto same = beta;
    CHECK_FALSE(canonicalize_branch(same));
    auto flipped = flip_branch(beta);
    CHECK(canonicalize_branch(flipped));
    for (std::size_t i = 0; i < beta.angles.size(); ++i)
      CHECK(circ(flipped.angles[i], beta.angles[i], kTwoPi) < 1e-12);

    // theta = 0: the normal has no y component, so +x decides.
    auto horizontal = flip_branch(sim::ground_truth_direction(sim::gen_carrier(32, 32, {10.0, 0.0})));
    CHECK(canonicalize_branch(horizontal));
    CHECK(horizontal.angles(4, 4) == doctest::Approx(kPi / 2));
  }
}
