#include "fringeproc/container.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <limits>

namespace fringe {
namespace {

constexpr std::array<std::uint8_t, 4> kMagic{0x46, 0x50, 0x41, 0x49};

static_assert(std::endian::native == std::endian::little,
              "FPAI encoding assumes a little-endian host");

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> bytes, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes[offset + i]) << (8 * i);
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_container(std::span<const RealImage> channels) {
  if (channels.empty()) throw InvalidArgument("container: need at least one channel");
  const auto rows = channels.front().rows();
  const auto cols = channels.front().cols();
  for (const auto& ch : channels) require_same_shape(ch, channels.front(), "container");
  constexpr auto kMax = std::numeric_limits<std::uint32_t>::max();
  if (rows > kMax || cols > kMax || channels.size() > kMax) {
    throw InvalidArgument("container: dimensions exceed u32");
  }

  std::vector<std::uint8_t> out;
  out.reserve(kFpaiHeaderBytes + channels.size() * rows * cols * 4);
  out.insert(out.end(), kMagic.begin(), kMagic.end());
  put_u32(out, kFpaiVersion);
  put_u32(out, static_cast<std::uint32_t>(rows));
  put_u32(out, static_cast<std::uint32_t>(cols));
  put_u32(out, static_cast<std::uint32_t>(channels.size()));
  put_u32(out, 0);

  for (const auto& ch : channels) {
    for (double v : ch) {
      const auto f = static_cast<float>(v);
      if (!std::isfinite(f)) {
        throw FormatError(FormatErrc::non_finite, "refusing to write a non-finite sample");
      }
      put_u32(out, std::bit_cast<std::uint32_t>(f));
    }
  }
  return out;
}

std::vector<RealImage> decode_container(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || !std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw FormatError(FormatErrc::bad_magic, "expected FPAI magic 46 50 41 49");
  }
  if (bytes.size() < kFpaiHeaderBytes) {
    throw FormatError(FormatErrc::truncated, "header shorter than 24 bytes");
  }
  const auto version = get_u32(bytes, 4);
  if (version != kFpaiVersion) {
    throw FormatError(FormatErrc::version_mismatch,
                      "FPAI version " + std::to_string(version) + ", expected 1");
  }
  const std::size_t rows = get_u32(bytes, 8);
  const std::size_t cols = get_u32(bytes, 12);
  const std::size_t channels = get_u32(bytes, 16);
  if (rows == 0 || cols == 0 || channels == 0) {
    throw FormatError(FormatErrc::malformed, "zero dimension in header");
  }
  const std::size_t expected = kFpaiHeaderBytes + channels * rows * cols * 4;
  if (bytes.size() < expected) {
    throw FormatError(FormatErrc::truncated, "payload has " + std::to_string(bytes.size()) +
                                                 " bytes, header requires " +
                                                 std::to_string(expected));
  }
  if (bytes.size() > expected) {
    throw FormatError(FormatErrc::malformed, "trailing bytes after payload");
  }

  std::vector<RealImage> out;
  out.reserve(channels);
  std::size_t offset = kFpaiHeaderBytes;
  for (std::size_t ch = 0; ch < channels; ++ch) {
    RealImage img(rows, cols);
    for (auto& v : img) {
      const auto f = std::bit_cast<float>(get_u32(bytes, offset));
      offset += 4;
      if (!std::isfinite(f)) {
        throw FormatError(FormatErrc::non_finite,
                          "sample in channel " + std::to_string(ch) + " is NaN or Inf");
      }
      v = f;
    }
    out.push_back(std::move(img));
  }
  return out;
}

void write_container(const std::filesystem::path& path, std::span<const RealImage> channels) {
  const auto bytes = encode_container(channels);
  write_file_atomic(path, bytes);
}

std::vector<RealImage> read_container(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return decode_container(bytes);
}

RealImage read_image(const std::filesystem::path& path) {
  auto channels = read_container(path);
  if (channels.size() != 1) {
    throw FormatError(FormatErrc::shape_audit, path.string() + ": expected 1 channel, found " +
                                                   std::to_string(channels.size()));
  }
  return std::move(channels.front());
}

void write_image(const std::filesystem::path& path, const RealImage& img) {
  write_container(path, std::span<const RealImage>(&img, 1));
}

RealImage quantize_f32(const RealImage& img) {
  RealImage out = img;
  for (auto& v : out) v = static_cast<float>(v);
  return out;
}

std::string_view to_string(MapKind kind) noexcept {
  switch (kind) {
    case MapKind::fringe:
      return "fringe";
    case MapKind::phase:
      return "phase";
    case MapKind::orientation:
      return "orientation";
    case MapKind::direction:
      return "direction";
    case MapKind::encoding:
      return "encoding";
    case MapKind::error_map:
      return "error_map";
  }
  return "fringe";
}

MapKind map_kind_from_string(std::string_view s) {
  for (auto k : {MapKind::fringe, MapKind::phase, MapKind::orientation, MapKind::direction,
                 MapKind::encoding, MapKind::error_map}) {
    if (to_string(k) == s) return k;
  }
  throw FormatError(FormatErrc::malformed, "unknown map kind '" + std::string(s) + "'");
}

std::filesystem::path sidecar_path(const std::filesystem::path& container) {
  auto p = container;
  p.replace_extension(".json");
  return p;
}

void write_sidecar(const std::filesystem::path& container, MapKind kind, std::uint64_t seed,
                   const nlohmann::json& params) {
  nlohmann::json j;
  j["kind"] = to_string(kind);
  j["seed"] = seed;
  j["params"] = params.is_null() ? nlohmann::json::object() : params;
  write_text_atomic(sidecar_path(container), j.dump(2) + "\n");
}

nlohmann::json read_sidecar(const std::filesystem::path& container) {
  const auto p = sidecar_path(container);
  if (!std::filesystem::exists(p)) return nlohmann::json::object();
  const auto bytes = read_file_bytes(p);
  try {
    return nlohmann::json::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(FormatErrc::malformed, p.string() + ": " + e.what());
  }
}

}  // namespace fringe
