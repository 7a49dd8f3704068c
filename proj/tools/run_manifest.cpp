#include "run_manifest.hpp"

#include <cstdio>

#include "fringeproc/container.hpp"

namespace fringe::cli {

std::string fnv1a64_hex(std::span<const std::uint8_t> bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::uint8_t b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string file_digest(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return fnv1a64_hex(bytes);
}

RunManifest::RunManifest(std::string command, std::vector<std::string> argv, std::uint64_t seed) {
  j_["tool"] = "fringeproc";
  j_["format_version"] = 1;
  j_["command"] = std::move(command);
  j_["argv"] = std::move(argv);
  j_["seed"] = seed;
  j_["options"] = nlohmann::json::object();
  j_["inputs"] = nlohmann::json::object();
  j_["outputs"] = nlohmann::json::object();
  j_["results"] = nlohmann::json::object();
}

void RunManifest::option(const std::string& name, nlohmann::json value) {
  j_["options"][name] = std::move(value);
}

void RunManifest::input(const std::string& name, const std::filesystem::path& path) {
  j_["inputs"][name] = {{"path", path.string()}, {"fnv1a64", file_digest(path)}};
}

void RunManifest::output(const std::string& name, const std::filesystem::path& path) {
  j_["outputs"][name] = {{"path", path.string()}, {"fnv1a64", file_digest(path)}};
}

void RunManifest::result(const std::string& name, nlohmann::json value) {
  j_["results"][name] = std::move(value);
}

void RunManifest::write(const std::filesystem::path& path) const {
  write_text_atomic(path, j_.dump(2) + "\n");
}

}  // namespace fringe::cli
