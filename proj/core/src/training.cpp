#include <cmath>
#include <numeric>

#include "fringeproc/errors.hpp"
#include "fringeproc/metrics.hpp"
#include "fringeproc/network.hpp"
#include "fringeproc/rng.hpp"
#include "fringeproc/simulate.hpp"

namespace fringe::deep {

void TrainConfig::validate() const {
  if (!(initial_lr > 0.0) || !std::isfinite(initial_lr)) {
    throw InvalidArgument("train: initial learning rate must be positive");
  }
  if (!(lr_drop_factor >= 1.0)) throw InvalidArgument("train: lr drop factor must be >= 1");
  if (lr_drop_period_epochs < 1) throw InvalidArgument("train: lr drop period must be >= 1");
  if (epochs < 0) throw InvalidArgument("train: epochs must be >= 0");
  if (batch_size < 1) throw InvalidArgument("train: batch size must be >= 1");
  if (!(adam_beta1 >= 0.0 && adam_beta1 < 1.0) || !(adam_beta2 >= 0.0 && adam_beta2 < 1.0) ||
      !(adam_eps > 0.0)) {
    throw InvalidArgument("train: invalid Adam hyperparameters");
  }
}

double TrainConfig::lr_for_epoch(int epoch) const noexcept {
  const int drops = std::max(0, epoch - 1) / lr_drop_period_epochs;
  return initial_lr / std::pow(lr_drop_factor, drops);
}

nlohmann::json to_json(const TrainConfig& cfg) {
  return {{"initial_lr", cfg.initial_lr},
          {"lr_drop_factor", cfg.lr_drop_factor},
          {"lr_drop_period_epochs", cfg.lr_drop_period_epochs},
          {"epochs", cfg.epochs},
          {"batch_size", cfg.batch_size},
          {"optimizer", "adam"},
          {"adam_beta1", cfg.adam_beta1},
          {"adam_beta2", cfg.adam_beta2},
          {"adam_eps", cfg.adam_eps},
          {"loss", "mse"},
          {"shuffle_seed", cfg.shuffle_seed},
          {"init_seed", cfg.init_seed}};
}

TrainConfig train_config_from_json(const nlohmann::json& j) {
  try {
    if (j.value("optimizer", "adam") != "adam" || j.value("loss", "mse") != "mse")
      throw FormatError(FormatErrc::config_mismatch, "only adam with mse loss is supported");
    TrainConfig cfg;
    cfg.initial_lr = j.at("initial_lr").get<double>();
    cfg.lr_drop_factor = j.at("lr_drop_factor").get<double>();
    cfg.lr_drop_period_epochs = j.at("lr_drop_period_epochs").get<int>();
    cfg.epochs = j.at("epochs").get<int>();
    cfg.batch_size = j.at("batch_size").get<int>();
    cfg.adam_beta1 = j.at("adam_beta1").get<double>();
    cfg.adam_beta2 = j.at("adam_beta2").get<double>();
    cfg.adam_eps = j.at("adam_eps").get<double>();
    cfg.shuffle_seed = j.at("shuffle_seed").get<std::uint64_t>();
    cfg.init_seed = j.at("init_seed").get<std::uint64_t>();
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(FormatErrc::malformed, std::string("train config: ") + e.what());
  }
}

nlohmann::json to_json(const EpochRecord& r) {
  return {{"epoch", r.epoch},
          {"lr", r.lr},
          {"train_loss", r.train_loss},
          {"val_loss", r.val_loss},
          {"val_oe", r.val_oe}};
}

Evaluation evaluate(const ModelWeights& weights, const std::vector<TrainingExample>& set) {
  if (set.empty()) throw InvalidArgument("evaluate: empty set");
  Evaluation e;
  for (const auto& ex : set) {
    const auto pred = forward(weights, ex.input);
    e.loss += loss_mse(pred, ex.target);
    const auto fo = sim::decode_orientation(pred);
    e.oe += metrics::orientation_error(fo, ex.fo);
  }
  e.loss /= static_cast<double>(set.size());
  e.oe /= static_cast<double>(set.size());
  return e;
}

TrainResult train_from(ModelWeights initial, const std::vector<TrainingExample>& train_set,
                       const std::vector<TrainingExample>& val_set, const TrainConfig& train_cfg,
                       const EpochCallback& on_epoch) {
  train_cfg.validate();
  if (train_set.empty()) throw InvalidArgument("train: empty training set");
  if (val_set.empty()) throw InvalidArgument("train: empty validation set");
  for (const auto* set : {&train_set, &val_set}) {
    for (const auto& ex : *set) check_input_shape(initial.config, ex.input);
  }

  TrainResult result;
  result.initial = evaluate(initial, val_set);
  result.best = initial;
  double best_loss = result.initial.loss;

  ModelWeights w = std::move(initial);
  AdamState adam = make_adam_state(w);
  adam.beta1 = train_cfg.adam_beta1;
  adam.beta2 = train_cfg.adam_beta2;
  adam.eps = train_cfg.adam_eps;

  Rng shuffler(train_cfg.shuffle_seed);
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto accum = zeros_like(w);

  for (int epoch = 1; epoch <= train_cfg.epochs; ++epoch) {
    const double lr = train_cfg.lr_for_epoch(epoch);
    shuffler.shuffle(std::span<std::size_t>(order));
    double train_loss = 0.0;

    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(train_cfg.batch_size)) {
      const std::size_t end =
          std::min(order.size(), start + static_cast<std::size_t>(train_cfg.batch_size));
      for (auto& t : accum) std::fill(t.values.begin(), t.values.end(), 0.0);
      for (std::size_t k = start; k < end; ++k) {
        const auto& ex = train_set[order[k]];
        auto br = backward(w, ex.input, ex.target);
        train_loss += br.loss;
        for (std::size_t i = 0; i < accum.size(); ++i) {
          auto& dst = accum[i].values;
          const auto& src = br.grads[i].values;
          for (std::size_t j = 0; j < dst.size(); ++j) dst[j] += src[j];
        }
      }
      const double scale = 1.0 / static_cast<double>(end - start);
      for (auto& t : accum)
        for (double& v : t.values) v *= scale;
      adam_step(w, accum, adam, lr);
    }

    const auto val = evaluate(w, val_set);
    if (!std::isfinite(val.loss)) throw NumericalError("train: validation loss diverged");
    EpochRecord rec{epoch, lr, train_loss / static_cast<double>(train_set.size()), val.loss,
                    val.oe};
    result.history.push_back(rec);
    if (val.loss < best_loss) {
      best_loss = val.loss;
      result.best = w;
      result.best_epoch = epoch;
    }
    if (on_epoch) on_epoch(rec);
  }
  return result;
}

TrainResult train(const std::vector<TrainingExample>& train_set,
                  const std::vector<TrainingExample>& val_set, const NetworkConfig& net_cfg,
                  const TrainConfig& train_cfg, const EpochCallback& on_epoch) {
  net_cfg.validate();
  return train_from(build_network(net_cfg, train_cfg.init_seed), train_set, val_set, train_cfg,
                    on_epoch);
}

}  // namespace fringe::deep
