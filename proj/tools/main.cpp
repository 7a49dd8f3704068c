#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "commands.hpp"
#include "fringeproc/container.hpp"
#include "fringeproc/errors.hpp"

namespace {

using namespace fringe;
using namespace fringe::cli;
namespace fs = std::filesystem;

enum Exit : int { kOk = 0, kUsage = 2, kIo = 3, kNumerical = 4 };

constexpr const char* kFooter =
    "Exit codes: 0 success, 2 usage, 3 I/O or format, 4 numerical failure.\n"
    "FRINGEPROC_THREADS caps the number of worker threads.";

int run_cli(const std::vector<std::string>& args, int depth);

// Option values as given (or defaulted), by long name.
nlohmann::json option_values(const CLI::App& sub) {
  nlohmann::json out = nlohmann::json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    if (opt->get_lnames().empty()) continue;
    const auto& name = opt->get_lnames().front();
    if (name == "help") continue;
    if (opt->count() == 0) {
      out[name] = opt->get_default_str();
    } else if (opt->get_items_expected_max() > 1 || opt->results().size() > 1) {
      out[name] = opt->results();
    } else {
      out[name] = opt->results().front();
    }
  }
  return out;
}

int execute(Command& cmd, const std::vector<std::string>& args) {
  RunManifest manifest(cmd.app->get_name(), args, cmd.common.seed);
  manifest.option("values", option_values(*cmd.app));
  const auto report = cmd.run(manifest);
  if (!cmd.common.json_report.empty()) write_text_atomic(cmd.common.json_report, report.dump(2) + "\n");
  const fs::path mpath = cmd.common.manifest.empty() ? cmd.default_manifest() : fs::path(cmd.common.manifest);
  manifest.write(mpath);
  return kOk;
}

int rerun(const std::string& manifest_path, int depth) {
  if (depth > 0) throw InvalidArgument("rerun: a manifest cannot point at another rerun");
  const auto bytes = read_file_bytes(manifest_path);
  std::vector<std::string> argv;
  try {
    const auto j = nlohmann::json::parse(bytes.begin(), bytes.end());
    argv = j.at("argv").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(FormatErrc::malformed, manifest_path + ": " + e.what());
  }
  return run_cli(argv, depth + 1);
}

int run_cli(const std::vector<std::string>& args, int depth) {
  CLI::App app{"fringeproc: fringe orientation, direction and phase tools"};
  app.footer(kFooter);
  app.require_subcommand(1);
  auto commands = register_commands(app);
  for (auto& c : commands) c->app->footer(kFooter);

  std::string rerun_path;
  auto* rr = app.add_subcommand("rerun", "Repeat a command from its run manifest");
  rr->add_option("manifest", rerun_path, "Run manifest (.json)")->required();

  std::vector<const char*> argv{"fringeproc"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (rr->parsed()) return rerun(rerun_path, depth);
  for (auto& c : commands)
    if (c->app->parsed()) return execute(*c, args);
  return kUsage;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run_cli(args, 0);
  } catch (const InvalidArgument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kIo;
  } catch (const FormatError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kIo;
  } catch (const ShapeError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kIo;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kNumerical;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kIo;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return kNumerical;
  }
}
