#include "commands.hpp"

#include <cmath>

#include "fringeproc/classic.hpp"
#include "fringeproc/container.hpp"
#include "fringeproc/dataset.hpp"
#include "fringeproc/errors.hpp"
#include "fringeproc/hst.hpp"
#include "fringeproc/metrics.hpp"
#include "fringeproc/network.hpp"
#include "fringeproc/simulate.hpp"
#include "fringeproc/sweep.hpp"
#include "fringeproc/unwrap.hpp"

namespace fringe::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path beside(const fs::path& file, const std::string& suffix) {
  fs::path p = file;
  p.replace_extension(suffix);
  return p;
}

// Re-throws component errors with the pipeline stage in front, keeping the
// error class (and so the exit code).
template <class F>
auto stage(const std::string& name, F&& f) -> decltype(f()) {
  const std::string p = "stage " + name + ": ";
  try {
    return f();
  } catch (const FormatError& e) {
    throw FormatError(e.code(), p + e.what());
  } catch (const IoError& e) {
    throw IoError(p + e.what());
  } catch (const ShapeError& e) {
    throw ShapeError(p + e.what());
  } catch (const InvalidArgument& e) {
    throw InvalidArgument(p + e.what());
  } catch (const NumericalError& e) {
    throw NumericalError(p + e.what());
  }
}

void write_map(const fs::path& path, const RealImage& img, MapKind kind, std::uint64_t seed,
               const json& params, RunManifest& m, const std::string& name) {
  write_image(path, img);
  write_sidecar(path, kind, seed, params);
  m.output(name, path);
}

void write_fo(const fs::path& path, const OrientationMap& fo, std::uint64_t seed, const json& params,
              RunManifest& m, const std::string& name) {
  sim::write_orientation(path, fo);
  write_sidecar(path, MapKind::orientation, seed, params);
  m.output(name, path);
}

Command& add(std::vector<std::unique_ptr<Command>>& cmds, CLI::App& app, const std::string& name,
             const std::string& description) {
  auto cmd = std::make_unique<Command>();
  cmd->app = app.add_subcommand(name, description);
  cmd->app->add_option("--seed", cmd->common.seed, "Random seed (recorded even when unused)")
      ->capture_default_str();
  cmd->app->add_option("--json-report", cmd->common.json_report, "Write a JSON report of the run here");
  cmd->app->add_option("--manifest", cmd->common.manifest,
                       "Run manifest path (default: next to the primary output)");
  cmds.push_back(std::move(cmd));
  return *cmds.back();
}

// --- simulate ---------------------------------------------------------------

void add_simulate(std::vector<std::unique_ptr<Command>>& cmds, CLI::App& app) {
  struct Opts {
    std::string out;
    std::size_t rows = 256, cols = 256;
    std::string object = "peaks";
    double a = 5.0;
    double blob_amplitude = 1.0;
    double period = 14.0;
    double theta = 0.0;
    bool no_carrier = false;
    double noise = 0.0;
  };
  auto o = std::make_shared<Opts>();
  auto& cmd = add(cmds, app, "simulate", "Simulate a fringe pattern with its ground-truth maps");
  auto* s = cmd.app;
  s->add_option("--out", o->out, "Output directory")->required();
  s->add_option("--rows", o->rows, "Image rows")->capture_default_str();
  s->add_option("--cols", o->cols, "Image columns")->capture_default_str();
  s->add_option("--object", o->object, "Object phase: peaks, gaussians, blobs or none")
      ->check(CLI::IsMember({"peaks", "gaussians", "blobs", "none"}))
      ->capture_default_str();
  s->add_option("--a", o->a, "Peaks coefficient")->capture_default_str();
  s->add_option("--blob-amplitude", o->blob_amplitude, "Blob-mask phase amplitude (rad)")
      ->capture_default_str();
  s->add_option("--period", o->period, "Carrier period T (px)")->capture_default_str();
  s->add_option("--theta", o->theta, "Carrier azimuth (rad)")->capture_default_str();
  s->add_flag("--no-carrier", o->no_carrier, "Omit the carrier");
  s->add_option("--noise", o->noise, "Additive Gaussian noise std")->capture_default_str();

  cmd.default_manifest = [o] { return fs::path(o->out) / "run_manifest.json"; };
  cmd.run = [o, &cmd](RunManifest& m) {
    const auto seed = cmd.common.seed;
    if (o->rows < 8 || o->cols < 8) throw InvalidArgument("simulate: images must be at least 8x8");
    sim::PhaseMap phase(o->rows, o->cols, 0.0);
    if (o->object == "peaks") phase = sim::gen_peaks_phase(o->rows, o->cols, o->a);
    if (o->object == "gaussians") phase = sim::gen_object_phase_gaussians(o->rows, o->cols, seed);
    if (o->object == "blobs")
      phase = sim::gen_blob_mask_phase(o->rows, o->cols, seed, o->blob_amplitude);
    if (!o->no_carrier) {
      const auto c = sim::gen_carrier(o->rows, o->cols, {o->period, o->theta});
      for (std::size_t i = 0; i < phase.size(); ++i) phase[i] += c[i];
    }
    if (o->noise < 0.0) throw InvalidArgument("simulate: noise must be >= 0");
    auto fringe = sim::render_fringe(phase);
    if (o->noise > 0.0) fringe = sim::add_gaussian_noise(fringe, o->noise, seed);

    const fs::path dir = o->out;
    fs::create_directories(dir);
    const json params = {{"object", o->object},       {"a", o->a},
                         {"blob_amplitude", o->blob_amplitude}, {"period", o->period},
                         {"theta", o->theta},         {"carrier", !o->no_carrier},
                         {"noise_std", o->noise}};
    json fringe_params = params;
    fringe_params["ground_truth"] = {
        {"phase", "phase.fpai"}, {"orientation", "fo.fpai"}, {"direction", "direction.fpai"}};
    write_map(dir / "fringe.fpai", fringe, MapKind::fringe, seed, fringe_params, m, "fringe");
    write_map(dir / "phase.fpai", phase, MapKind::phase, seed, params, m, "phase");
    const auto fo = sim::ground_truth_orientation(phase);
    write_fo(dir / "fo.fpai", fo, seed, params, m, "orientation");
    write_map(dir / "direction.fpai", sim::ground_truth_direction(phase).angles, MapKind::direction, seed,
              params, m, "direction");
    sim::write_encoding(dir / "encoding.fpai", sim::encode_orientation(fo));
    write_sidecar(dir / "encoding.fpai", MapKind::encoding, seed, params);
    m.output("encoding", dir / "encoding.fpai");
    m.result("valid_orientation_fraction", fo.valid_fraction());
    return json{{"out", dir.string()}, {"valid_orientation_fraction", fo.valid_fraction()}};
  };
}

// --- make-dataset -----------------------------------------------------------

void add_make_dataset(std::vector<std::unique_ptr<Command>>& cmds, CLI::App& app) {
  struct Opts {
    std::string out;
    std::size_t count = 200, rows = 64, cols = 64;
    std::string family = "gaussians";
    double noise = 0.0;
  };
  auto o = std::make_shared<Opts>();
  auto& cmd = add(cmds, app, "make-dataset", "Generate a seeded training/validation corpus");
  auto* s = cmd.app;
  s->add_option("--out", o->out, "Output directory")->required();
  s->add_option("--count", o->count, "Number of items")->capture_default_str();
  s->add_option("--rows", o->rows, "Image rows")->capture_default_str();
  s->add_option("--cols", o->cols, "Image columns")->capture_default_str();
  s->add_option("--family", o->family, "Object family: gaussians, peaks or blobs")
      ->check(CLI::IsMember({"gaussians", "peaks", "blobs"}))
      ->capture_default_str();
  s->add_option("--noise", o->noise, "Additive Gaussian noise std")->capture_default_str();

  cmd.default_manifest = [o] { return fs::path(o->out) / "run_manifest.json"; };
  cmd.run = [o, &cmd](RunManifest& m) {
    sim::DatasetManifest dm;
    dm.base_seed = cmd.common.seed;
    dm.count = o->count;
    dm.rows = o->rows;
    dm.cols = o->cols;
    dm.family = sim::phase_family_from_string(o->family);
    dm.noise_std = o->noise;
    dm.plan_items();
    sim::make_dataset(dm, o->out);
    m.output("dataset_manifest", fs::path(o->out) / "manifest.json");
    m.result("count", o->count);
    return json{{"out", o->out}, {"count", o->count}};
  };
}

// --- train ------------------------------------------------------------------

std::vector<deep::TrainingExample> load_examples(const fs::path& dir) {
  std::vector<deep::TrainingExample> out;
  for (auto& s : sim::load_dataset(dir))
    out.push_back({std::move(s.fringe), std::move(s.encoding), std::move(s.fo)});
  return out;
}

void add_train(std::vector<std::unique_ptr<Command>>& cmds, CLI::App& app) {
  struct Opts {
    std::string train_dir, val_dir, out, init;
    deep::NetworkConfig net;
    deep::TrainConfig tc;
  };
  auto o = std::make_shared<Opts>();
  o->tc.epochs = 10;
  auto& cmd = add(cmds, app, "train", "Train the orientation network with Adam on an MSE loss");
  auto* s = cmd.app;
  s->add_option("--train", o->train_dir, "Training dataset directory")->required();
  s->add_option("--val", o->val_dir, "Validation dataset directory")->required();
  s->add_option("--out", o->out, "Output weights (.fpaw)")->required();
  s->add_option("--init", o->init, "Start from these weights instead of a fresh network");
  s->add_option("--paths", o->net.paths, "Resolution paths")->capture_default_str();
  s->add_option("--filters", o->net.filters, "Filters per convolution")->capture_default_str();
  s->add_option("--blocks", o->net.blocks_per_path, "Residual blocks per path")->capture_default_str();
  s->add_option("--kernel", o->net.kernel_size, "Convolution kernel size")->capture_default_str();
  s->add_option("--epochs", o->tc.epochs, "Epochs")->capture_default_str();
  s->add_option("--batch", o->tc.batch_size, "Batch size")->capture_default_str();
  s->add_option("--lr", o->tc.initial_lr, "Initial learning rate")->capture_default_str();
  s->add_option("--lr-drop-factor", o->tc.lr_drop_factor, "Learning-rate divisor per drop")
      ->capture_default_str();
  s->add_option("--lr-drop-period", o->tc.lr_drop_period_epochs, "Epochs between drops")
      ->capture_default_str();

  cmd.default_manifest = [o] { return beside(o->out, ".run.json"); };
  cmd.run = [o, &cmd](RunManifest& m) {
    auto tc = o->tc;
    tc.init_seed = cmd.common.seed;
    tc.shuffle_seed = cmd.common.seed;
    const auto train_set = load_examples(o->train_dir);
    const auto val_set = load_examples(o->val_dir);
    m.input("train_manifest", fs::path(o->train_dir) / "manifest.json");
    m.input("val_manifest", fs::path(o->val_dir) / "manifest.json");
    auto log = [](const deep::EpochRecord& r) {
      std::fprintf(stderr, "epoch %d lr %.3g train_loss %.6f val_loss %.6f val_oe %.6f\n", r.epoch, r.lr,
                   r.train_loss, r.val_loss, r.val_oe);
    };
    deep::TrainResult res;
    if (o->init.empty()) {
      o->net.validate();
      res = deep::train(train_set, val_set, o->net, tc, log);
    } else {
      m.input("init_weights", o->init);
      res = deep::train_from(deep::load_weights(o->init), train_set, val_set, tc, log);
    }
    deep::save_weights(res.best, o->out);
    m.output("weights", o->out);

    json history = json::array();
    for (const auto& r : res.history) history.push_back(deep::to_json(r));
    json report = {{"network", deep::to_json(res.best.config)},
                   {"train_config", deep::to_json(tc)},
                   {"parameters", res.best.parameter_count()},
                   {"initial", {{"val_loss", res.initial.loss}, {"val_oe", res.initial.oe}}},
                   {"best_epoch", res.best_epoch},
                   {"history", history}};
    m.result("train_config", deep::to_json(tc));
    m.result("network", deep::to_json(res.best.config));
    m.result("best_epoch", res.best_epoch);
    m.result("history", history);
    return report;
  };
}

// --- infer / orient-classic -------------------------------------------------

void add_infer(std::vector<std::unique_ptr<Command>>& cmds, CLI::App& app) {
  struct Opts {
    std::string model, input, out, encoding_out;
    bool no_prefilter = false;
  };
  auto o = std::make_shared<Opts>();
  auto& cmd = add(cmds, app, "infer", "Estimate fringe orientation with a trained network");
  auto* s = cmd.app;
  s->add_option("--model", o->model, "Weights (.fpaw)")->required();
  s->add_option("--input", o->input, "Fringe image (.fpai)")->required();
  s->add_option("--out", o->out, "Output orientation map (.fpai, angle + valid)")->required();
  s->add_option("--encoding-out", o->encoding_out, "Also write the raw (sin 2FO, cos 2FO) output");
  s->add_flag("--no-prefilter", o->no_prefilter, "Input is already prefiltered");

  cmd.default_manifest = [o] { return beside(o->out, ".run.json"); };
  cmd.run = [o, &cmd](RunManifest& m) {
    const auto model = deep::load_weights(o->model);
    auto img = read_image(o->input);
    m.input("model", o->model);
    m.input("fringe", o->input);
    if (!o->no_prefilter) img = classic::prefilter(img);
    const auto enc = deep::forward(model, img);
    const auto fo = deep::infer_orientation(model, img);
    const json params = {{"method", "deeporient"}, {"prefilter", !o->no_prefilter}};
    write_fo(o->out, fo, cmd.common.seed, params, m, "orientation");
    if (!o->encoding_out.empty()) {
      sim::write_encoding(o->encoding_out, enc);
      write_sidecar(o->encoding_out, MapKind::encoding, cmd.common.seed, params);
      m.output("encoding", o->encoding_out);
    }
    m.result("valid_fraction", fo.valid_fraction());
    return json{{"valid_fraction", fo.valid_fraction()}};
  };
}

void add_orient_classic(std::vector<std::unique_ptr<Command>>& cmds, CLI::App& app) {
  struct Opts {
    std::string input, out, method = "cpfg";
    int window = 2;
    bool no_prefilter = false;
  };
  auto o = std::make_shared<Opts>();
  auto& cmd = add(cmds, app, "orient-classic", "Estimate fringe orientation with gradient or CPFG");
  auto* s = cmd.app;
  s->add_option("--input", o->input, "Fringe image (.fpai)")->required();
  s->add_option("--out", o->out, "Output orientation map (.fpai)")->required();
  s->add_option("--method", o->method, "gradient or cpfg")
      ->check(CLI::IsMember({"gradient", "cpfg"}))
      ->capture_default_str();
  s->add_option("--window", o->window, "Window side w")->capture_default_str();
  s->add_flag("--no-prefilter", o->no_prefilter, "Input is already prefiltered");

  cmd.default_manifest = [o] { return beside(o->out, ".run.json"); };
  cmd.run = [o, &cmd](RunManifest& m) {
    auto img = read_image(o->input);
    m.input("fringe", o->input);
    if (!o->no_prefilter) img = classic::prefilter(img);
    const classic::WindowSpec win{o->window};
    const auto fo = o->method == "gradient" ? classic::gradient_orientation(img, win)
                                            : classic::cpfg_orientation(img, win);
    write_fo(o->out, fo, cmd.common.seed,
             {{"method", o->method}, {"window", o->window}, {"prefilter", !o->no_prefilter}}, m,
             "orientation");
    m.result("valid_fraction", fo.valid_fraction());
    return json{{"valid_fraction", fo.valid_fraction()}};
  };
}

// --- unwrap-orientation / demodulate ---------------------------------------

void add_unwrap(std::vector<std::unique_ptr<Command>>& cmds, CLI::App& app) {
  struct Opts {
    std::string input, out;
    bool keep_branch = false;
    bool flip = false;
  };
  auto o = std::make_shared<Opts>();
  auto& cmd = add(cmds, app, "unwrap-orientation", "Turn an orientation map into a direction map");
  auto* s = cmd.app;
  s->add_option("--input", o->input, "Orientation map (.fpai, angle + valid)")->required();
  s->add_option("--out", o->out, "Output direction map (.fpai)")->required();
  s->add_flag("--keep-branch", o->keep_branch, "Skip the canonical branch choice");
  s->add_flag("--flip-branch", o->flip, "Add pi to the final direction map");

  cmd.default_manifest = [o] { return beside(o->out, ".run.json"); };
  cmd.run = [o, &cmd](RunManifest& m) {
    const auto fo = sim::read_orientation(o->input);
    m.input("orientation", o->input);
    auto beta = unwrap::orientation_to_direction(fo);
    bool flipped = false;
    if (!o->keep_branch) flipped = unwrap::canonicalize_branch(beta);
    if (o->flip) {
      beta = unwrap::flip_branch(beta);
      flipped = !flipped;
    }
    write_map(o->out, beta.angles, MapKind::direction, cmd.common.seed,
              {{"canonical_branch", !o->keep_branch}, {"flipped", flipped}}, m, "direction");
    const json branch = {{"flipped", flipped}, {"valid_fraction", fo.valid_fraction()}};
    m.result("branch", branch);
    return branch;
  };
}

void add_demodulate(std::vector<std::unique_ptr<Command>>& cmds, CLI::App& app) {
  struct Opts {
    std::string input, direction, out_phase, out_wrapped;
    bool prefilter = false;
  };
  auto o = std::make_shared<Opts>();
  auto& cmd = add(cmds, app, "demodulate", "Recover the phase with the spiral-phase quadrature transform");
  auto* s = cmd.app;
  s->add_option("--input", o->input, "Fringe image (.fpai), expected zero-mean")->required();
  s->add_option("--direction", o->direction, "Direction map (.fpai)")->required();
  s->add_option("--out-phase", o->out_phase, "Unwrapped phase output (.fpai)")->required();
  s->add_option("--out-wrapped", o->out_wrapped, "Wrapped phase output (.fpai)");
  s->add_flag("--prefilter", o->prefilter, "Prefilter the fringe first");

  cmd.default_manifest = [o] { return beside(o->out_phase, ".run.json"); };
  cmd.run = [o, &cmd](RunManifest& m) {
    auto img = read_image(o->input);
    const DirectionMap beta{read_image(o->direction)};
    m.input("fringe", o->input);
    m.input("direction", o->direction);
    if (o->prefilter) img = classic::prefilter(img);
    const auto d = hst::demodulate(img, beta);
    for (const auto& w : d.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    const json params = {{"prefilter", o->prefilter}};
    write_map(o->out_phase, d.unwrapped, MapKind::phase, cmd.common.seed, params, m, "phase");
    if (!o->out_wrapped.empty())
      write_map(o->out_wrapped, d.wrapped.phase, MapKind::phase, cmd.common.seed, params, m, "wrapped");
    const json r = {{"masked_pixels", d.wrapped.masked_count()}, {"warnings", d.warnings}};
    m.result("demodulation", r);
    return r;
  };
}

// --- evaluate ---------------------------------------------------------------

metrics::EvalReport evaluate_files(const std::string& pred, const std::string& ref,
                                   const std::string& metric, std::size_t border) {
  metrics::EvalReport rep;
  rep.method = metric;
  rep.excluded_border = border;
  if (metric == "oe") {
    const auto d = metrics::orientation_error_detail(sim::read_orientation(pred), sim::read_orientation(ref),
                                                     border);
    rep.orientation_error = d.oe;
    rep.valid_pixel_fraction = d.valid_fraction;
  } else if (metric == "rmse-sin") {
    const auto p = sim::encode_orientation(sim::read_orientation(pred));
    const auto r = sim::encode_orientation(sim::read_orientation(ref));
    const auto c = metrics::rmse_channels(p, r);
    rep.rmse_sin = c.rmse_sin;
    rep.rmse_cos = c.rmse_cos;
    rep.valid_pixel_fraction = 1.0;
  } else {
    rep.rmse_phase = metrics::rmse_phase(read_image(pred), read_image(ref), border);
    rep.valid_pixel_fraction = 1.0;
  }
  return rep;
}

void add_evaluate(std::vector<std::unique_ptr<Command>>& cmds, CLI::App& app) {
  struct Opts {
    std::string pred, ref, metric = "oe";
    std::size_t border = 0;
    bool print_json = false;
  };
  auto o = std::make_shared<Opts>();
  auto& cmd = add(cmds, app, "evaluate", "Compare a prediction with a reference map");
  auto* s = cmd.app;
  s->add_option("--pred", o->pred, "Predicted map (.fpai)")->required();
  s->add_option("--ref", o->ref, "Reference map (.fpai)")->required();
  s->add_option("--metric", o->metric, "oe, rmse-sin or rmse-phase")
      ->check(CLI::IsMember({"oe", "rmse-sin", "rmse-phase"}))
      ->capture_default_str();
  s->add_option("--exclude-border", o->border, "Border width left out of the metric")
      ->capture_default_str();
  s->add_flag("--json", o->print_json, "Print the report as JSON on stdout");

  cmd.default_manifest = [o] { return beside(o->pred, ".eval.run.json"); };
  cmd.run = [o](RunManifest& m) {
    m.input("pred", o->pred);
    m.input("ref", o->ref);
    const auto rep = evaluate_files(o->pred, o->ref, o->metric, o->border);
    const auto j = rep.to_json();
    if (o->print_json) {
      std::printf("%s\n", j.dump(2).c_str());
    } else {
      if (rep.orientation_error) std::printf("OE %.6g\n", *rep.orientation_error);
      if (rep.rmse_sin) std::printf("RMSE sin %.6g cos %.6g\n", *rep.rmse_sin, *rep.rmse_cos);
      if (rep.rmse_phase) std::printf("RMSE phase %.6g rad\n", *rep.rmse_phase);
    }
    m.result("report", j);
    return j;
  };
}

// --- benchmark --------------------------------------------------------------

void add_benchmark(std::vector<std::unique_ptr<Command>>& cmds, CLI::App& app) {
  struct Opts {
    sweep::SweepConfig cfg;
    std::vector<std::string> methods{"gradient", "cpfg"};
    std::string out, model, error_maps;
  };
  auto o = std::make_shared<Opts>();
  auto& cmd = add(cmds, app, "benchmark", "Orientation-error sweep over peaks modulation and noise");
  auto* s = cmd.app;
  s->add_option("--out", o->out, "CSV output (a,noise_std,method,seed,oe)")->required();
  s->add_option("--a-values", o->cfg.a_values, "Peaks coefficients")->capture_default_str();
  s->add_option("--noise", o->cfg.noise_std, "Noise std values")->capture_default_str();
  s->add_option("--methods", o->methods, "Any of gradient, cpfg, deeporient")
      ->check(CLI::IsMember({"gradient", "cpfg", "deeporient"}))
      ->capture_default_str();
  s->add_option("--period", o->cfg.period, "Carrier period T (px)")->capture_default_str();
  s->add_option("--theta", o->cfg.theta, "Carrier azimuth (rad)")->capture_default_str();
  s->add_option("--window", o->cfg.window, "Classical window side w")->capture_default_str();
  s->add_option("--reps", o->cfg.repetitions, "Noise realizations per point")->capture_default_str();
  s->add_option("--size", o->cfg.size, "Image side (px)")->capture_default_str();
  s->add_option("--border", o->cfg.border, "Border excluded from OE")->capture_default_str();
  s->add_option("--model", o->model, "Weights (.fpaw), required for deeporient");
  s->add_option("--error-maps", o->error_maps, "Directory for |sin 2FO - sin 2FO_gt| maps");

  cmd.default_manifest = [o] { return beside(o->out, ".run.json"); };
  cmd.run = [o, &cmd](RunManifest& m) {
    auto cfg = o->cfg;
    cfg.seed = cmd.common.seed;
    cfg.methods.clear();
    for (const auto& name : o->methods) cfg.methods.push_back(sweep::method_from_string(name));
    cfg.validate();
    std::optional<deep::ModelWeights> model;
    if (!o->model.empty()) {
      model = deep::load_weights(o->model);
      m.input("model", o->model);
    } else if (cfg.needs_model()) {
      throw InvalidArgument("benchmark: method deeporient needs --model");
    }
    std::optional<fs::path> maps;
    if (!o->error_maps.empty()) maps = o->error_maps;
    const auto rows = sweep::run_sweep(cfg, model ? &*model : nullptr, maps);
    write_text_atomic(o->out, sweep::to_csv(rows));
    m.output("csv", o->out);
    m.result("sweep", sweep::to_json(cfg));
    m.result("rows", rows.size());
    return json{{"sweep", sweep::to_json(cfg)}, {"rows", rows.size()}};
  };
}

// --- pipeline ---------------------------------------------------------------

void add_pipeline(std::vector<std::unique_ptr<Command>>& cmds, CLI::App& app) {
  struct Opts {
    std::string input, model, out;
    std::size_t border = 16;
  };
  auto o = std::make_shared<Opts>();
  auto& cmd = add(cmds, app, "pipeline",
                  "Fringe to phase: prefilter, network orientation, unwrap, spiral demodulation");
  auto* s = cmd.app;
  s->add_option("--input", o->input, "Fringe image (.fpai)")->required();
  s->add_option("--model", o->model, "Weights (.fpaw)")->required();
  s->add_option("--out", o->out, "Output directory")->required();
  s->add_option("--exclude-border", o->border, "Border left out of the evaluation")
      ->capture_default_str();

  cmd.default_manifest = [o] { return fs::path(o->out) / "run_manifest.json"; };
  cmd.run = [o, &cmd](RunManifest& m) {
    const auto seed = cmd.common.seed;
    const fs::path dir = o->out;
    const auto model = stage("load-model", [&] { return deep::load_weights(o->model); });
    const auto fringe = stage("load-input", [&] { return read_image(o->input); });
    m.input("model", o->model);
    m.input("fringe", o->input);
    fs::create_directories(dir);

    const auto pre = stage("prefilter", [&] { return classic::prefilter(fringe); });
    const auto fo = stage("orientation", [&] { return deep::infer_orientation(model, pre); });
    auto beta = stage("unwrap", [&] { return unwrap::orientation_to_direction(fo); });
    const bool flipped = unwrap::canonicalize_branch(beta);
    const auto d = stage("demodulate", [&] { return hst::demodulate(pre, beta); });
    for (const auto& w : d.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());

    write_fo(dir / "fo.fpai", fo, seed, {{"method", "deeporient"}}, m, "orientation");
    write_map(dir / "direction.fpai", beta.angles, MapKind::direction, seed, {{"flipped", flipped}}, m,
              "direction");
    write_map(dir / "wrapped.fpai", d.wrapped.phase, MapKind::phase, seed, {{"wrapped", true}}, m, "wrapped");
    write_map(dir / "phase.fpai", d.unwrapped, MapKind::phase, seed, {{"wrapped", false}}, m, "phase");

    json report = {{"branch", {{"canonical", true}, {"flipped", flipped}}},
                   {"masked_pixels", d.wrapped.masked_count()},
                   {"warnings", d.warnings}};
    const auto side = read_sidecar(o->input);
    if (side.contains("params") && side["params"].contains("ground_truth")) {
      stage("evaluate", [&] {
        const auto& gt = side["params"]["ground_truth"];
        const fs::path base = fs::path(o->input).parent_path();
        const auto gt_fo = sim::read_orientation(base / gt.at("orientation").get<std::string>());
        const auto gt_phase = read_image(base / gt.at("phase").get<std::string>());
        const auto oe = metrics::orientation_error_detail(fo, gt_fo, o->border);
        // A fringe cannot tell phi from -phi; report the sign that matches.
        RealImage neg = d.unwrapped;
        for (double& v : neg) v = -v;
        const double plus = metrics::rmse_phase(d.unwrapped, gt_phase, o->border);
        const double minus = metrics::rmse_phase(neg, gt_phase, o->border);
        metrics::EvalReport rep;
        rep.method = "pipeline";
        rep.orientation_error = oe.oe;
        rep.rmse_phase = std::min(plus, minus);
        rep.excluded_border = o->border;
        rep.valid_pixel_fraction = oe.valid_fraction;
        report["evaluation"] = rep.to_json();
        report["phase_sign"] = plus <= minus ? 1 : -1;
      });
    }
    write_text_atomic(dir / "report.json", report.dump(2) + "\n");
    m.output("report", dir / "report.json");
    m.result("pipeline", report);
    return report;
  };
}

}  // namespace

std::vector<std::unique_ptr<Command>> register_commands(CLI::App& app) {
  std::vector<std::unique_ptr<Command>> cmds;
  add_simulate(cmds, app);
  add_make_dataset(cmds, app);
  add_train(cmds, app);
  add_infer(cmds, app);
  add_orient_classic(cmds, app);
  add_unwrap(cmds, app);
  add_demodulate(cmds, app);
  add_evaluate(cmds, app);
  add_benchmark(cmds, app);
  add_pipeline(cmds, app);
  return cmds;
}

}  // namespace fringe::cli
