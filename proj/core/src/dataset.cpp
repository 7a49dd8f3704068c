#include "fringeproc/dataset.hpp"

#include <array>
#include <cstdio>

#include "fringeproc/container.hpp"

namespace fringe::sim {
namespace {

using nlohmann::json;

json range_json(const Range& r) { return json::array({r.lo, r.hi}); }

Range range_from(const json& j, const char* key) {
  const auto& a = j.at(key);
  if (!a.is_array() || a.size() != 2) {
    throw FormatError(FormatErrc::malformed, std::string("manifest field '") + key +
                                                 "' must be a [lo, hi] pair");
  }
  return {a[0].get<double>(), a[1].get<double>()};
}

std::string item_name(std::size_t index, const char* suffix) {
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "item_%05zu_%s.fpai", index, suffix);
  return buf.data();
}

}  // namespace

std::string_view to_string(PhaseFamily family) noexcept {
  switch (family) {
    case PhaseFamily::gaussians:
      return "gaussians";
    case PhaseFamily::peaks:
      return "peaks";
    case PhaseFamily::blobs:
      return "blobs";
  }
  return "gaussians";
}

PhaseFamily phase_family_from_string(std::string_view s) {
  for (auto f : {PhaseFamily::gaussians, PhaseFamily::peaks, PhaseFamily::blobs}) {
    if (to_string(f) == s) return f;
  }
  throw InvalidArgument("unknown phase family '" + std::string(s) + "'");
}

void DatasetManifest::validate() const {
  if (count == 0) throw InvalidArgument("dataset count must be positive");
  if (rows < kMinEstimatorSide || cols < kMinEstimatorSide) {
    throw InvalidArgument("dataset images must be at least 8x8");
  }
  ranges.validate();
  if (!(noise_std >= 0.0)) throw InvalidArgument("noise_std must be non-negative");
  if (peaks_coeff.hi < peaks_coeff.lo || peaks_coeff.lo < 0.0) {
    throw InvalidArgument("peaks coefficient range must be non-negative and ordered");
  }
  if (blob_amplitude.hi < blob_amplitude.lo || blob_amplitude.lo < 0.0) {
    throw InvalidArgument("blob amplitude range must be non-negative and ordered");
  }
  if (!items.empty() && items.size() != count) {
    throw InvalidArgument("manifest item list does not match count");
  }
}

void DatasetManifest::plan_items() {
  items.clear();
  items.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    DatasetItem it;
    it.index = i;
    it.seed = derive_seed(base_seed, i);
    it.fringe = item_name(i, "fringe");
    it.encoding = item_name(i, "encoding");
    it.fo = item_name(i, "fo");
    it.phase = item_name(i, "phase");
    items.push_back(std::move(it));
  }
}

json to_json(const DatasetManifest& m) {
  json j;
  j["format"] = "fringeproc-dataset";
  j["version"] = 1;
  j["base_seed"] = m.base_seed;
  j["seed_mixing"] = "splitmix64(base_seed + 0x9E3779B97F4A7C15 * (index + 1))";
  j["count"] = m.count;
  j["image_size"] = json::array({m.rows, m.cols});
  j["family"] = to_string(m.family);
  j["kernel_count_range"] = json::array({m.ranges.kernel_count_min, m.ranges.kernel_count_max});
  j["sigma_range"] = range_json(m.ranges.sigma_fraction);
  j["amplitude_range"] = range_json(m.ranges.amplitude);
  j["period_range"] = range_json(m.ranges.period);
  j["theta_range"] = range_json(m.ranges.theta);
  j["peaks_coeff_range"] = range_json(m.peaks_coeff);
  j["blob_amplitude_range"] = range_json(m.blob_amplitude);
  j["noise_std"] = m.noise_std;
  json items = json::array();
  for (const auto& it : m.items) {
    items.push_back({{"index", it.index},
                     {"seed", it.seed},
                     {"fringe", it.fringe},
                     {"encoding", it.encoding},
                     {"fo", it.fo},
                     {"phase", it.phase}});
  }
  j["items"] = std::move(items);
  return j;
}

DatasetManifest manifest_from_json(const json& j) {
  try {
    DatasetManifest m;
    if (j.value("version", 0) != 1) {
      throw FormatError(FormatErrc::version_mismatch, "dataset manifest version must be 1");
    }
    m.base_seed = j.at("base_seed").get<std::uint64_t>();
    m.count = j.at("count").get<std::size_t>();
    const auto& size = j.at("image_size");
    m.rows = size.at(0).get<std::size_t>();
    m.cols = size.at(1).get<std::size_t>();
    m.family = phase_family_from_string(j.value("family", std::string("gaussians")));
    const auto& kc = j.at("kernel_count_range");
    m.ranges.kernel_count_min = kc.at(0).get<long>();
    m.ranges.kernel_count_max = kc.at(1).get<long>();
    m.ranges.sigma_fraction = range_from(j, "sigma_range");
    m.ranges.amplitude = range_from(j, "amplitude_range");
    m.ranges.period = range_from(j, "period_range");
    m.ranges.theta = range_from(j, "theta_range");
    if (j.contains("peaks_coeff_range")) m.peaks_coeff = range_from(j, "peaks_coeff_range");
    if (j.contains("blob_amplitude_range")) {
      m.blob_amplitude = range_from(j, "blob_amplitude_range");
    }
    m.noise_std = j.at("noise_std").get<double>();
    if (j.contains("items")) {
      for (const auto& it : j.at("items")) {
        DatasetItem item;
        item.index = it.at("index").get<std::size_t>();
        item.seed = it.at("seed").get<std::uint64_t>();
        item.fringe = it.at("fringe").get<std::string>();
        item.encoding = it.at("encoding").get<std::string>();
        item.fo = it.at("fo").get<std::string>();
        item.phase = it.value("phase", std::string());
        m.items.push_back(std::move(item));
      }
    }
    return m;
  } catch (const json::exception& e) {
    throw FormatError(FormatErrc::malformed, std::string("dataset manifest: ") + e.what());
  }
}

DatasetManifest default_training_manifest(std::uint64_t seed) {
  DatasetManifest m;
  m.base_seed = seed;
  m.count = 200;
  m.plan_items();
  return m;
}

DatasetManifest default_validation_manifest(std::uint64_t seed) {
  DatasetManifest m;
  m.base_seed = seed;
  m.count = 50;
  m.plan_items();
  return m;
}

Sample generate_item(const DatasetManifest& m, std::size_t index) {
  if (index >= m.count) throw InvalidArgument("dataset item index out of range");
  const std::uint64_t seed =
      index < m.items.size() ? m.items[index].seed : derive_seed(m.base_seed, index);
  Rng rng(seed);

  PhaseMap object;
  switch (m.family) {
    case PhaseFamily::gaussians: {
      const auto kernels = draw_gaussian_kernels(m.rows, m.cols, rng, m.ranges);
      object = render_gaussian_kernels(m.rows, m.cols, kernels);
      break;
    }
    case PhaseFamily::peaks:
      object = gen_peaks_phase(m.rows, m.cols, rng.uniform(m.peaks_coeff.lo, m.peaks_coeff.hi));
      break;
    case PhaseFamily::blobs: {
      const double amp = rng.uniform(m.blob_amplitude.lo, m.blob_amplitude.hi);
      object = gen_blob_mask_phase(m.rows, m.cols, rng.next_u64(), amp);
      break;
    }
  }
  const auto carrier = draw_carrier(rng, m.ranges);
  const auto ramp = gen_carrier(m.rows, m.cols, carrier);

  Sample s;
  s.phase = object;
  for (std::size_t i = 0; i < s.phase.size(); ++i) s.phase[i] += ramp[i];
  s.fringe = add_gaussian_noise(render_fringe(s.phase), m.noise_std, derive_seed(seed, 1));
  s.fo = ground_truth_orientation(s.phase);
  s.encoding = encode_orientation(s.fo);
  return s;
}

void write_orientation(const std::filesystem::path& path, const OrientationMap& fo) {
  RealImage valid(fo.rows(), fo.cols());
  for (std::size_t i = 0; i < valid.size(); ++i) valid[i] = fo.valid[i] ? 1.0 : 0.0;
  const std::array<RealImage, 2> ch{fo.angles, valid};
  write_container(path, ch);
}

OrientationMap read_orientation(const std::filesystem::path& path) {
  auto ch = read_container(path);
  if (ch.empty() || ch.size() > 2) {
    throw FormatError(FormatErrc::shape_audit,
                      path.string() + ": orientation files hold 1 or 2 channels");
  }
  OrientationMap fo{ch[0], Mask(ch[0].rows(), ch[0].cols(), 1)};
  for (std::size_t i = 0; i < fo.angles.size(); ++i) {
    if (ch.size() == 2 && ch[1][i] == 0.0) {
      fo.valid[i] = 0;
      continue;
    }
    // float32 storage can round pi - eps up to pi
    fo.angles[i] = wrap_pi(fo.angles[i]);
  }
  return fo;
}

void write_encoding(const std::filesystem::path& path, const OrientationEncoding& enc) {
  const std::array<RealImage, 2> ch{enc.sin2, enc.cos2};
  write_container(path, ch);
}

OrientationEncoding read_encoding(const std::filesystem::path& path) {
  auto ch = read_container(path);
  if (ch.size() != 2) {
    throw FormatError(FormatErrc::shape_audit, path.string() + ": encoding needs 2 channels");
  }
  return {std::move(ch[0]), std::move(ch[1])};
}

void make_dataset(DatasetManifest m, const std::filesystem::path& dir) {
  if (m.items.empty()) m.plan_items();
  m.validate();
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create dataset directory " + dir.string());

  for (const auto& item : m.items) {
    const auto s = generate_item(m, item.index);
    write_image(dir / item.fringe, s.fringe);
    write_encoding(dir / item.encoding, s.encoding);
    write_orientation(dir / item.fo, s.fo);
    write_image(dir / item.phase, s.phase);
  }
  write_text_atomic(dir / "manifest.json", to_json(m).dump(2) + "\n");
}

DatasetManifest load_manifest(const std::filesystem::path& dir) {
  const auto bytes = read_file_bytes(dir / "manifest.json");
  json j;
  try {
    j = json::parse(bytes.begin(), bytes.end());
  } catch (const json::exception& e) {
    throw FormatError(FormatErrc::malformed, "manifest.json: " + std::string(e.what()));
  }
  auto m = manifest_from_json(j);
  if (m.items.empty()) m.plan_items();
  m.validate();
  return m;
}

std::vector<Sample> load_dataset(const std::filesystem::path& dir) {
  const auto m = load_manifest(dir);
  std::vector<Sample> out;
  out.reserve(m.items.size());
  for (const auto& item : m.items) {
    Sample s;
    s.fringe = read_image(dir / item.fringe);
    s.encoding = read_encoding(dir / item.encoding);
    s.fo = read_orientation(dir / item.fo);
    if (!item.phase.empty() && std::filesystem::exists(dir / item.phase)) {
      s.phase = read_image(dir / item.phase);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace fringe::sim
