#include <array>
#include <bit>
#include <cmath>

#include "fringeproc/container.hpp"
#include "fringeproc/network.hpp"

namespace fringe::deep {
namespace {

using nlohmann::json;

constexpr std::array<std::uint8_t, 4> kMagic{0x46, 0x50, 0x41, 0x57};

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[offset + i]) << (8 * i);
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_weights(const ModelWeights& weights) {
  weights.audit();
  json header;
  header["format"] = "fringeproc-weights";
  header["config"] = to_json(weights.config);
  header["dtype"] = "float32";
  header["byte_order"] = "little";
  json table = json::array();
  for (const auto& t : weights.tensors) table.push_back({{"name", t.name}, {"shape", t.shape}});
  header["tensors"] = std::move(table);
  const std::string text = header.dump();

  std::vector<std::uint8_t> out;
  out.insert(out.end(), kMagic.begin(), kMagic.end());
  put_u32(out, kFpawVersion);
  put_u32(out, static_cast<std::uint32_t>(text.size()));
  out.insert(out.end(), text.begin(), text.end());
  for (const auto& t : weights.tensors) {
    for (double v : t.values) {
      const auto f = static_cast<float>(v);
      if (!std::isfinite(f)) {
        throw FormatError(FormatErrc::non_finite, "tensor '" + t.name + "' overflows float32");
      }
      put_u32(out, std::bit_cast<std::uint32_t>(f));
    }
  }
  return out;
}

ModelWeights decode_weights(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || !std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw FormatError(FormatErrc::bad_magic, "expected FPAW magic 46 50 41 57");
  }
  if (bytes.size() < 12) throw FormatError(FormatErrc::truncated, "FPAW header too short");
  const auto version = get_u32(bytes, 4);
  if (version != kFpawVersion) {
    throw FormatError(FormatErrc::version_mismatch,
                      "FPAW version " + std::to_string(version) + ", expected 1");
  }
  const std::size_t json_len = get_u32(bytes, 8);
  if (bytes.size() < 12 + json_len) {
    throw FormatError(FormatErrc::truncated, "FPAW config block runs past end of file");
  }

  json header;
  NetworkConfig cfg;
  try {
    header = json::parse(bytes.begin() + 12, bytes.begin() + 12 + static_cast<long>(json_len));
    cfg = network_config_from_json(header.at("config"));
    cfg.validate();
  } catch (const json::exception& e) {
    throw FormatError(FormatErrc::malformed, std::string("FPAW config: ") + e.what());
  } catch (const InvalidArgument& e) {
    throw FormatError(FormatErrc::config_mismatch, e.what());
  }

  const auto specs = tensor_layout(cfg);
  const auto& table = header.at("tensors");
  if (!table.is_array() || table.size() != specs.size()) {
    throw FormatError(FormatErrc::config_mismatch,
                      "tensor table lists " + std::to_string(table.size()) +
                          " tensors, config implies " + std::to_string(specs.size()));
  }

  ModelWeights w;
  w.config = cfg;
  std::size_t offset = 12 + json_len;
  for (std::size_t i = 0; i < specs.size(); ++i) {
    std::string name;
    std::vector<std::size_t> shape;
    try {
      name = table[i].at("name").get<std::string>();
      shape = table[i].at("shape").get<std::vector<std::size_t>>();
    } catch (const json::exception& e) {
      throw FormatError(FormatErrc::malformed, std::string("FPAW tensor table: ") + e.what());
    }
    if (name != specs[i].name) {
      throw FormatError(FormatErrc::config_mismatch,
                        "tensor " + std::to_string(i) + " is '" + name + "', config expects '" +
                            specs[i].name + "'");
    }
    if (shape != specs[i].shape) {
      throw FormatError(FormatErrc::shape_audit,
                        "tensor '" + name + "' shape disagrees with the embedded config");
    }
    const std::size_t n = specs[i].numel();
    if (bytes.size() < offset + 4 * n) {
      throw FormatError(FormatErrc::truncated, "tensor '" + name + "' runs past end of file");
    }
    Tensor t{name, shape, std::vector<double>(n)};
    for (std::size_t j = 0; j < n; ++j, offset += 4) {
      const auto f = std::bit_cast<float>(get_u32(bytes, offset));
      if (!std::isfinite(f)) {
        throw FormatError(FormatErrc::non_finite, "tensor '" + name + "' holds NaN/Inf");
      }
      t.values[j] = f;
    }
    w.tensors.push_back(std::move(t));
  }
  if (offset != bytes.size()) {
    throw FormatError(FormatErrc::shape_audit, "FPAW payload has " +
                                                   std::to_string(bytes.size() - offset) +
                                                   " bytes beyond the declared tensors");
  }
  w.audit();
  return w;
}

void save_weights(const ModelWeights& weights, const std::filesystem::path& path) {
  write_file_atomic(path, encode_weights(weights));
}

ModelWeights load_weights(const std::filesystem::path& path) {
  return decode_weights(read_file_bytes(path));
}

}  // namespace fringe::deep
