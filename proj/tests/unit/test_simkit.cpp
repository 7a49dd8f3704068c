#include <doctest.h>

#include <cmath>

#include "fringeproc/container.hpp"
#include "fringeproc/dataset.hpp"
#include "fringeproc/filters.hpp"
#include "fringeproc/simulate.hpp"
#include "support.hpp"

using namespace fringe;
using namespace fringe::sim;
using testing::circ;

TEST_SUITE("simkit") {
  TEST_CASE("rng is deterministic and seeds mix by index") {
    Rng a(123), b(123);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
    CHECK(derive_seed(5, 0) != derive_seed(5, 1));
    CHECK(derive_seed(5, 1) == splitmix64(5 + 0x9E3779B97F4A7C15ull * 2));
    Rng u(9);
    for (int i = 0; i < 1000; ++i) {
      const double x = u.uniform();
      CHECK((x >= 0.0 && x < 1.0));
      const long k = u.uniform_int(-2, 3);
      CHECK((k >= -2 && k <= 3));
    }
  }

  TEST_CASE("gaussian kernels") {
    PhaseRanges none;
    none.kernel_count_min = none.kernel_count_max = 0;
    const auto zero = gen_object_phase_gaussians(32, 32, 1, none);
    for (double v : zero) CHECK(v == 0.0);

    const GaussianKernelSpec k{20.0, 20.0, 10.0, 1.0};
    const std::vector<GaussianKernelSpec> one{k};
    const auto single = render_gaussian_kernels(41, 41, one);
    CHECK(single(20, 20) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(single(20, 30) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
    CHECK(single(20, 30) == doctest::Approx(0.6065).epsilon(1e-4));

    const std::vector<GaussianKernelSpec> two{k, k};
    const auto doubled = render_gaussian_kernels(41, 41, two);
    for (std::size_t i = 0; i < doubled.size(); ++i) CHECK(doubled[i] == 2.0 * single[i]);

    const auto p1 = gen_object_phase_gaussians(32, 32, 77);
    const auto p2 = gen_object_phase_gaussians(32, 32, 77);
    CHECK(p1 == p2);
  }

  TEST_CASE("peaks surface") {
    CHECK(peaks(0.0, 0.0) == doctest::Approx(8.0 / 3.0 / std::exp(1.0)).epsilon(1e-14));
    CHECK(peaks(0.0, 0.0) == doctest::Approx(0.98101).epsilon(1e-5));
    const auto p = gen_peaks_phase(33, 33, 1.0);
    CHECK(p(16, 16) == doctest::Approx(0.98101).epsilon(1e-5));
    // X follows columns: pixel (row 0, col 32) is X = 3, Y = -3.
    CHECK(p(0, 32) == doctest::Approx(peaks(3.0, -3.0)).epsilon(1e-14));

    const auto z = gen_peaks_phase(16, 16, 0.0);
    for (double v : z) CHECK(v == 0.0);
    const auto a = gen_peaks_phase(16, 16, 2.5);
    const auto b = gen_peaks_phase(16, 16, 5.0);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(b[i] == 2.0 * a[i]);
  }

  TEST_CASE("carrier evaluation") {
    const auto c0 = gen_carrier(128, 32, {14.0, 0.0});
    CHECK(c0(0, 14) == doctest::Approx(kTwoPi).epsilon(1e-15));
    CHECK(c0(123, 0) == 0.0);
    const auto c90 = gen_carrier(16, 16, {14.0, kPi / 2});
    CHECK(c90(7, 5) == doctest::Approx(kPi).epsilon(1e-12));
    CHECK_THROWS_AS(gen_carrier(8, 8, {2.0, 0.0}), InvalidArgument);
    CHECK_THROWS_AS(gen_carrier(8, 8, {10.0, kPi}), InvalidArgument);
  }

  TEST_CASE("blob mask phase") {
    const auto m = gen_blob_mask(64, 64, 3);
    for (double v : m) CHECK((v >= 0.0 && v <= 1.0 + 1e-12));
    double peak = 0.0;
    for (double v : m) peak = std::max(peak, v);
    CHECK(peak > 0.5);
    const auto z = gen_blob_mask_phase(64, 64, 3, 0.0);
    for (double v : z) CHECK(v == 0.0);
    CHECK(gen_blob_mask_phase(64, 64, 3, 2.0) == gen_blob_mask_phase(64, 64, 3, 2.0));
  }

  TEST_CASE("fringe rendering") {
    for (double v : render_fringe(RealImage(8, 8, 0.0))) CHECK(v == 1.0);
    for (double v : render_fringe(RealImage(8, 8, kPi))) CHECK(v == -1.0);
    const auto f = render_fringe(gen_carrier(8, 16, {14.0, 0.0}));
    CHECK(f(3, 7) == doctest::Approx(-1.0).epsilon(1e-15));
    for (double v : render_fringe(gen_object_phase_gaussians(32, 32, 5)))
      CHECK((v >= -1.0 && v <= 1.0));
  }

  TEST_CASE("gaussian noise statistics") {
    const RealImage base(512, 512, 0.3);
    CHECK(add_gaussian_noise(base, 0.0, 1) == base);
    const auto noisy = add_gaussian_noise(base, 0.1, 2);
    double sum = 0.0, sq = 0.0;
    for (std::size_t i = 0; i < base.size(); ++i) {
      const double d = noisy[i] - base[i];
      sum += d;
      sq += d * d;
    }
    const double n = double(base.size());
    const double mu = sum / n;
    const double sd = std::sqrt(sq / n - mu * mu);
    CHECK(std::abs(mu) < 0.005);
    CHECK(std::abs(sd - 0.1) < 0.005);
    CHECK(add_gaussian_noise(base, 0.1, 2) == noisy);
    CHECK_THROWS_AS(add_gaussian_noise(base, -1.0, 2), InvalidArgument);
  }

  TEST_CASE("carrier ground truth over 32 random carriers") {
    Rng rng(2024);
    for (int t = 0; t < 32; ++t) {
      const CarrierSpec spec{rng.uniform(8.0, 32.0), rng.uniform(0.0, kPi)};
      const auto phase = gen_carrier(64, 64, spec);
      const auto fo = ground_truth_orientation(phase);
      const double expected = std::fmod(kPi / 2 - spec.theta + kPi, kPi);
      double worst = 0.0;
      for (std::size_t r = 1; r < 63; ++r)
        for (std::size_t c = 1; c < 63; ++c) {
          REQUIRE(fo.valid(r, c));
          worst = std::max(worst, circ(fo.angles(r, c), expected, kPi));
        }
      CHECK(worst < 1e-6);
    }
    const auto fo0 = ground_truth_orientation(gen_carrier(16, 16, {14.0, 0.0}));
    CHECK(fo0.angles(5, 5) == doctest::Approx(kPi / 2).epsilon(1e-15));
    const auto beta0 = ground_truth_direction(gen_carrier(16, 16, {14.0, 0.0}));
    CHECK(beta0.angles(5, 5) == doctest::Approx(kPi / 2).epsilon(1e-15));
  }

  TEST_CASE("constant phase has no valid orientation") {
    const auto fo = ground_truth_orientation(RealImage(16, 16, 1.3));
    CHECK(fo.valid_fraction() == 0.0);
    const auto enc = encode_orientation(fo);
    CHECK(enc.sin2(3, 3) == 0.0);
    CHECK(enc.cos2(3, 3) == 1.0);
  }

  TEST_CASE("direction and orientation agree, negation flips direction") {
    const auto phase = gen_object_phase_gaussians(48, 48, 8);
    const auto fo = ground_truth_orientation(phase);
    const auto beta = ground_truth_direction(phase);
    RealImage neg = phase;
    for (double& v : neg) v = -v;
    const auto beta_neg = ground_truth_direction(neg);
    for (std::size_t i = 0; i < phase.size(); ++i) {
      if (!fo.valid[i]) continue;
      CHECK(circ(wrap_pi(beta.angles[i]), fo.angles[i], kPi) < 1e-12);
      CHECK(circ(beta_neg.angles[i], beta.angles[i] + kPi, kTwoPi) < 1e-12);
    }
  }

  TEST_CASE("encoding examples and round trip") {
    const auto one = [](double a) {
      OrientationMap fo = testing::all_valid(RealImage(1, 1, a));
      return encode_orientation(fo);
    };
    auto e = one(0.0);
    CHECK(e.sin2[0] == 0.0);
    CHECK(e.cos2[0] == 1.0);
    e = one(kPi / 4);
    CHECK(e.sin2[0] == doctest::Approx(1.0));
    CHECK(std::abs(e.cos2[0]) < 1e-15);
    e = one(kPi / 2);
    CHECK(std::abs(e.sin2[0]) < 1e-15);
    CHECK(e.cos2[0] == doctest::Approx(-1.0));

    OrientationEncoding raw{RealImage(1, 3), RealImage(1, 3)};
    raw.sin2[0] = 0.0, raw.cos2[0] = 1.0;
    raw.sin2[1] = 0.6, raw.cos2[1] = 0.8;
    raw.sin2[2] = 1e-4, raw.cos2[2] = 1e-4;
    const auto d = decode_orientation(raw);
    CHECK(d.angles[0] == 0.0);
    CHECK(d.angles[1] == doctest::Approx(0.32175).epsilon(1e-5));
    CHECK(d.angles[1] == doctest::Approx(std::atan2(0.6, 0.8) / 2).epsilon(1e-15));
    CHECK(d.valid[1] == 1);
    CHECK(d.valid[2] == 0);

    for (double a : {0.1, 1.0, 2.5, 3.0}) CHECK(std::abs(decode_orientation(one(a)).angles[0] - a) < 1e-12);

    Rng rng(4);
    RealImage angles(100, 100);
    for (double& v : angles) v = rng.uniform(0.0, kPi);
    const auto back = decode_orientation(encode_orientation(testing::all_valid(angles)));
    double worst = 0.0;
    for (std::size_t i = 0; i < angles.size(); ++i) {
      CHECK(back.valid[i] == 1);
      CHECK((back.angles[i] >= 0.0 && back.angles[i] < kPi));
      worst = std::max(worst, circ(back.angles[i], angles[i], kPi));
    }
    CHECK(worst < 1e-12);
  }

  TEST_CASE("dataset manifests regenerate bit-identical files") {
    testing::TempDir a("ds_a"), b("ds_b");
    DatasetManifest m;
    m.base_seed = 31;
    m.count = 2;
    m.rows = m.cols = 32;
    m.noise_std = 0.05;
    make_dataset(m, a.path());
    const auto loaded = load_manifest(a.path());
    CHECK(loaded.items.size() == 2);
    CHECK(loaded.items[1].seed == derive_seed(31, 1));
    make_dataset(loaded, b.path());
    for (const auto& entry : std::filesystem::directory_iterator(a.path())) {
      const auto name = entry.path().filename();
      CHECK(read_file_bytes(a.path() / name) == read_file_bytes(b.path() / name));
    }
    const auto samples = load_dataset(a.path());
    REQUIRE(samples.size() == 2);
    const auto regenerated = generate_item(loaded, 1);
    CHECK(samples[1].fringe == quantize_f32(regenerated.fringe));
    CHECK(to_json(manifest_from_json(to_json(loaded))) == to_json(loaded));
  }

  TEST_CASE("desk-scale default manifests") {
    const auto tr = default_training_manifest(1);
    const auto va = default_validation_manifest(2);
    CHECK(tr.count == 200);
    CHECK(va.count == 50);
    CHECK(tr.rows == 64);
    CHECK(tr.cols == 64);
    CHECK(tr.ranges.kernel_count_max == 50);
  }

  TEST_CASE("noisy samples stay inside the Gaussian tail bound") {
    DatasetManifest m;
    m.count = 10;
    m.rows = m.cols = 64;
    m.noise_std = 0.1;
    m.plan_items();
    std::size_t outside = 0, total = 0;
    for (std::size_t i = 0; i < m.count; ++i) {
      for (double v : generate_item(m, i).fringe) {
        outside += std::abs(v) > 1.0 + 4.0 * m.noise_std;
        ++total;
      }
    }
    CHECK(double(outside) / double(total) <= 1e-4 * 3);
  }

  TEST_CASE("orientation files keep validity") {
    testing::TempDir dir("fo");
    auto fo = ground_truth_orientation(gen_peaks_phase(32, 32, 1.0));
    fo.valid(2, 2) = 0;
    write_orientation(dir / "fo.fpai", fo);
    const auto back = read_orientation(dir / "fo.fpai");
    CHECK(back.valid == fo.valid);
    CHECK(back.angles == quantize_f32(fo.angles));
  }
}
