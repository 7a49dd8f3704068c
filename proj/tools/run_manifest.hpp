#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace fringe::cli {

// FNV-1a 64-bit digest, hex encoded. Used to pin input and config contents
// in run manifests; not a security hash.
std::string fnv1a64_hex(std::span<const std::uint8_t> bytes);
std::string file_digest(const std::filesystem::path& path);

// Everything needed to repeat a command: its argv, seed, option values and
// digests of inputs and outputs. No timestamps, so reruns reproduce it byte
// for byte.
class RunManifest {
 public:
  RunManifest(std::string command, std::vector<std::string> argv, std::uint64_t seed);

  void option(const std::string& name, nlohmann::json value);
  void input(const std::string& name, const std::filesystem::path& path);
  void output(const std::string& name, const std::filesystem::path& path);
  void result(const std::string& name, nlohmann::json value);

  const nlohmann::json& json() const noexcept { return j_; }
  void write(const std::filesystem::path& path) const;

 private:
  nlohmann::json j_;
};

}  // namespace fringe::cli
