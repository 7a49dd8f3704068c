#include "fringeproc/sweep.hpp"

#include <charconv>

#include "fringeproc/classic.hpp"
#include "fringeproc/container.hpp"
#include "fringeproc/errors.hpp"
#include "fringeproc/metrics.hpp"
#include "fringeproc/parallel.hpp"
#include "fringeproc/rng.hpp"
#include "fringeproc/simulate.hpp"

namespace fringe::sweep {
namespace {

std::string format_real(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

struct CaseKey {
  double a;
  double noise;
  Method method;
  int rep;
};

}  // namespace

std::string_view to_string(Method m) noexcept {
  switch (m) {
    case Method::gradient: return "gradient";
    case Method::cpfg: return "cpfg";
    case Method::deeporient: return "deeporient";
  }
  return "?";
}

Method method_from_string(std::string_view s) {
  if (s == "gradient") return Method::gradient;
  if (s == "cpfg") return Method::cpfg;
  if (s == "deeporient") return Method::deeporient;
  throw InvalidArgument("unknown method '" + std::string(s) + "'");
}

void SweepConfig::validate() const {
  if (a_values.empty()) throw InvalidArgument("sweep: a_values is empty");
  if (noise_std.empty()) throw InvalidArgument("sweep: noise_std is empty");
  if (methods.empty()) throw InvalidArgument("sweep: methods is empty");
  for (double n : noise_std)
    if (!(n >= 0.0)) throw InvalidArgument("sweep: noise_std must be >= 0");
  if (repetitions < 1) throw InvalidArgument("sweep: repetitions must be >= 1");
  if (size < 16) throw InvalidArgument("sweep: size must be >= 16");
  if (2 * border >= size) throw InvalidArgument("sweep: border removes the whole image");
  sim::CarrierSpec{period, theta}.validate();
}

bool SweepConfig::needs_model() const noexcept {
  for (Method m : methods)
    if (m == Method::deeporient) return true;
  return false;
}

nlohmann::json to_json(const SweepConfig& cfg) {
  nlohmann::json methods = nlohmann::json::array();
  for (Method m : cfg.methods) methods.push_back(std::string(to_string(m)));
  return {{"a_values", cfg.a_values},   {"noise_std", cfg.noise_std}, {"methods", methods},
          {"period", cfg.period},       {"theta", cfg.theta},         {"window", cfg.window},
          {"repetitions", cfg.repetitions}, {"size", cfg.size},       {"border", cfg.border},
          {"seed", cfg.seed}};
}

SweepConfig sweep_config_from_json(const nlohmann::json& j) {
  try {
    SweepConfig cfg;
    cfg.a_values = j.at("a_values").get<std::vector<double>>();
    cfg.noise_std = j.at("noise_std").get<std::vector<double>>();
    cfg.methods.clear();
    for (const auto& m : j.at("methods")) cfg.methods.push_back(method_from_string(m.get<std::string>()));
    cfg.period = j.at("period").get<double>();
    cfg.theta = j.at("theta").get<double>();
    cfg.window = j.at("window").get<int>();
    cfg.repetitions = j.at("repetitions").get<int>();
    cfg.size = j.at("size").get<std::size_t>();
    cfg.border = j.at("border").get<std::size_t>();
    cfg.seed = j.at("seed").get<std::uint64_t>();
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(FormatErrc::malformed, std::string("sweep config: ") + e.what());
  }
}

std::uint64_t repetition_seed(const SweepConfig& cfg, int rep) noexcept {
  return derive_seed(cfg.seed, static_cast<std::uint64_t>(rep));
}

RealImage case_fringe(const SweepConfig& cfg, double a, double noise_std, int rep) {
  auto phase = sim::gen_peaks_phase(cfg.size, cfg.size, a);
  const auto carrier = sim::gen_carrier(cfg.size, cfg.size, {cfg.period, cfg.theta});
  for (std::size_t i = 0; i < phase.size(); ++i) phase[i] += carrier[i];
  auto fringe = sim::render_fringe(phase);
  if (noise_std > 0.0) fringe = sim::add_gaussian_noise(fringe, noise_std, repetition_seed(cfg, rep));
  return fringe;
}

std::string error_map_name(const SweepRow& row) {
  return "err_a" + format_real(row.a) + "_n" + format_real(row.noise_std) + "_" +
         std::string(to_string(row.method)) + "_r" + std::to_string(row.repetition) + ".fpai";
}

std::vector<SweepRow> run_sweep(const SweepConfig& cfg, const deep::ModelWeights* model,
                                const std::optional<std::filesystem::path>& error_map_dir) {
  cfg.validate();
  if (cfg.needs_model() && model == nullptr)
    throw InvalidArgument("sweep: method deeporient needs a model");
  const RealImage probe(cfg.size, cfg.size);
  classic::WindowSpec{cfg.window}.validate_for(probe);
  if (model != nullptr && cfg.needs_model()) deep::check_input_shape(model->config, probe);
  if (error_map_dir) std::filesystem::create_directories(*error_map_dir);

  std::vector<CaseKey> keys;
  for (double a : cfg.a_values)
    for (double n : cfg.noise_std)
      for (Method m : cfg.methods)
        for (int rep = 0; rep < cfg.repetitions; ++rep) keys.push_back({a, n, m, rep});

  // Ground truth depends on a only.
  std::vector<OrientationMap> truth(cfg.a_values.size());
  parallel_for(truth.size(), [&](std::size_t i) {
    auto phase = sim::gen_peaks_phase(cfg.size, cfg.size, cfg.a_values[i]);
    const auto carrier = sim::gen_carrier(cfg.size, cfg.size, {cfg.period, cfg.theta});
    for (std::size_t k = 0; k < phase.size(); ++k) phase[k] += carrier[k];
    truth[i] = sim::ground_truth_orientation(phase);
  });
  const std::size_t per_a = keys.size() / cfg.a_values.size();

  std::vector<SweepRow> rows(keys.size());
  parallel_for(keys.size(), [&](std::size_t i) {
    const auto& key = keys[i];
    const auto pre = classic::prefilter(case_fringe(cfg, key.a, key.noise, key.rep));
    OrientationMap fo;
    switch (key.method) {
      case Method::gradient: fo = classic::gradient_orientation(pre, {cfg.window}); break;
      case Method::cpfg: fo = classic::cpfg_orientation(pre, {cfg.window}); break;
      case Method::deeporient: fo = deep::infer_orientation(*model, pre); break;
    }
    const auto& gt = truth[i / per_a];
    SweepRow row{key.a, key.noise, key.method, key.rep, repetition_seed(cfg, key.rep),
                 metrics::orientation_error(fo, gt, cfg.border)};
    if (error_map_dir) {
      const auto path = *error_map_dir / error_map_name(row);
      write_image(path, metrics::orientation_sin_error_map(fo, gt));
      write_sidecar(path, MapKind::error_map, row.seed,
                    {{"a", row.a}, {"noise_std", row.noise_std},
                     {"method", std::string(to_string(row.method))}, {"repetition", row.repetition}});
    }
    rows[i] = row;
  });
  return rows;
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "a,noise_std,method,seed,oe\n";
  for (const auto& r : rows) {
    out += format_real(r.a) + "," + format_real(r.noise_std) + "," + std::string(to_string(r.method)) +
           "," + std::to_string(r.seed) + "," + format_real(r.oe) + "\n";
  }
  return out;
}

}  // namespace fringe::sweep
