#pragma once

// Orientation-error sweep over peaks modulation and noise level: one case
// per (a, noise_std, method, repetition).

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fringeproc/network.hpp"

namespace fringe::sweep {

enum class Method { gradient, cpfg, deeporient };

std::string_view to_string(Method m) noexcept;
Method method_from_string(std::string_view s);

struct SweepConfig {
  std::vector<double> a_values{0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
  std::vector<double> noise_std{0.0, 0.1};
  std::vector<Method> methods{Method::gradient, Method::cpfg};
  double period = 14.0;
  double theta = 0.0;
  int window = 2;
  int repetitions = 5;
  std::size_t size = 512;
  std::size_t border = 8;
  std::uint64_t seed = 1;

  void validate() const;
  bool needs_model() const noexcept;
};

nlohmann::json to_json(const SweepConfig& cfg);
SweepConfig sweep_config_from_json(const nlohmann::json& j);

struct SweepRow {
  double a = 0.0;
  double noise_std = 0.0;
  Method method = Method::cpfg;
  int repetition = 0;
  std::uint64_t seed = 0;  // noise seed of the repetition
  double oe = 0.0;
};

// Noise seed of repetition `rep`; shared by all a values and methods so
// that comparisons see the same noise realization.
std::uint64_t repetition_seed(const SweepConfig& cfg, int rep) noexcept;

// The noisy fringe of one case, before prefiltering.
RealImage case_fringe(const SweepConfig& cfg, double a, double noise_std, int rep);

// Rows come out in (a, noise, method, repetition) order. When error_map_dir
// is set, |sin 2FO - sin 2FO_gt| of every case is written there as FPAI.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg, const deep::ModelWeights* model = nullptr,
                                const std::optional<std::filesystem::path>& error_map_dir = {});

std::string error_map_name(const SweepRow& row);

// Header "a,noise_std,method,seed,oe"; reals in shortest round-trip form.
std::string to_csv(const std::vector<SweepRow>& rows);

}  // namespace fringe::sweep
