#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "run_manifest.hpp"

namespace fringe::cli {

// Flags shared by every command.
struct CommonOptions {
  std::uint64_t seed = 1;
  std::string json_report;
  std::string manifest;
};

struct Command {
  CLI::App* app = nullptr;
  CommonOptions common;
  // Fills the manifest (inputs, outputs, results) and returns the JSON
  // report of the run.
  std::function<nlohmann::json(RunManifest&)> run;
  // Manifest location when --manifest is not given.
  std::function<std::filesystem::path()> default_manifest;
};

// Registers all subcommands on `app`. Commands are heap-allocated so the
// option bindings stay valid.
std::vector<std::unique_ptr<Command>> register_commands(CLI::App& app);

}  // namespace fringe::cli
