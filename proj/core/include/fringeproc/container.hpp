#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "fringeproc/image.hpp"

namespace fringe {

// FPAI container, little-endian:
//   bytes 0..3   magic "FPAI" (46 50 41 49)
//   u32 version  = 1
//   u32 rows, u32 cols, u32 channels, u32 reserved = 0
//   channels*rows*cols float32 samples, channel-major then row-major.
inline constexpr std::uint32_t kFpaiVersion = 1;
inline constexpr std::size_t kFpaiHeaderBytes = 24;

std::vector<std::uint8_t> encode_container(std::span<const RealImage> channels);
std::vector<RealImage> decode_container(std::span<const std::uint8_t> bytes);

// Samples are stored as float32; writing rejects values that are not finite
// after narrowing. Reading rejects bad magic, other versions, short payloads
// and non-finite samples, each with its own FormatErrc.
void write_container(const std::filesystem::path& path, std::span<const RealImage> channels);
std::vector<RealImage> read_container(const std::filesystem::path& path);

// Convenience for single-channel files; throws FormatError when the file
// holds a different channel count.
RealImage read_image(const std::filesystem::path& path);
void write_image(const std::filesystem::path& path, const RealImage& img);

// Rounds every sample through float32, the precision the container keeps.
RealImage quantize_f32(const RealImage& img);

// Sidecar manifest: same basename, ".json" extension.
enum class MapKind { fringe, phase, orientation, direction, encoding, error_map };

std::string_view to_string(MapKind kind) noexcept;
MapKind map_kind_from_string(std::string_view s);

std::filesystem::path sidecar_path(const std::filesystem::path& container);

void write_sidecar(const std::filesystem::path& container, MapKind kind, std::uint64_t seed,
                   const nlohmann::json& params);
// Empty object when no sidecar exists.
nlohmann::json read_sidecar(const std::filesystem::path& container);

// Write bytes to a temporary sibling and rename over the destination.
void write_file_atomic(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_text_atomic(const std::filesystem::path& path, std::string_view text);
std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);

}  // namespace fringe
