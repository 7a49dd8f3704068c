#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fringeproc/image.hpp"
#include "fringeproc/maps.hpp"

namespace fringe::deep {

// Multi-path residual network shape. Path p (0-based) runs at 1/2^p of the
// input resolution.
struct NetworkConfig {
  int paths = 2;
  int filters = 16;
  int blocks_per_path = 2;
  int kernel_size = 3;

  void validate() const;
  std::size_t downsample_factor() const noexcept { return std::size_t{1} << (paths - 1); }

  // Two paths, 110 filters per path.
  static NetworkConfig selected_architecture() { return {2, 110, 2, 3}; }

  friend bool operator==(const NetworkConfig&, const NetworkConfig&) = default;
};

nlohmann::json to_json(const NetworkConfig& cfg);
NetworkConfig network_config_from_json(const nlohmann::json& j);

struct Tensor {
  std::string name;
  std::vector<std::size_t> shape;
  std::vector<double> values;

  std::size_t numel() const noexcept { return values.size(); }
};

struct TensorSpec {
  std::string name;
  std::vector<std::size_t> shape;
  std::size_t numel() const noexcept;
};

// Declared tensor order for a config. Names:
//   path<p>.input.{weight,bias}
//   path<p>.block<b>.conv{1,2}.{weight,bias}
//   head.{weight,bias}
// Conv kernels are out x in x k x k.
std::vector<TensorSpec> tensor_layout(const NetworkConfig& cfg);

struct ModelWeights {
  NetworkConfig config;
  std::vector<Tensor> tensors;

  const Tensor& at(std::string_view name) const;
  Tensor& at(std::string_view name);
  std::size_t parameter_count() const noexcept;

  // Throws FormatError(shape_audit) when tensors disagree with config.
  void audit() const;
};

// Glorot-uniform kernels, +-sqrt(6 / (fan_in + fan_out)) with
// fan_in = in*k*k and fan_out = out*k*k; zero biases.
ModelWeights build_network(const NetworkConfig& cfg, std::uint64_t init_seed);

// Zero tensors with the same layout.
std::vector<Tensor> zeros_like(const ModelWeights& w);

// Throws ShapeError unless rows/cols are positive multiples of
// 2^(paths-1).
void check_input_shape(const NetworkConfig& cfg, const RealImage& img);

OrientationEncoding forward(const ModelWeights& weights, const RealImage& img);

// Mean over both channels and all pixels of (pred - target)^2.
double loss_mse(const OrientationEncoding& pred, const OrientationEncoding& target);

struct BackwardResult {
  double loss = 0.0;
  std::vector<Tensor> grads;  // same order as ModelWeights::tensors
};

// Exact reverse-mode gradients of loss_mse(forward(img), target).
BackwardResult backward(const ModelWeights& weights, const RealImage& img,
                        const OrientationEncoding& target);

struct AdamState {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  std::uint64_t step = 0;
  std::vector<std::vector<double>> m;
  std::vector<std::vector<double>> v;
};

AdamState make_adam_state(const ModelWeights& w);

// One bias-corrected Adam update in place.
void adam_step(ModelWeights& weights, const std::vector<Tensor>& grads, AdamState& state,
               double lr);

// forward -> unit renormalization where s^2 + c^2 >= 1e-6 -> decode.
OrientationMap infer_orientation(const ModelWeights& weights, const RealImage& img);

// FPAW: "FPAW" magic, u32 version = 1, u32 JSON length, JSON (config and
// tensor table), float32 little-endian tensors in declared order.
inline constexpr std::uint32_t kFpawVersion = 1;

std::vector<std::uint8_t> encode_weights(const ModelWeights& weights);
ModelWeights decode_weights(std::span<const std::uint8_t> bytes);
void save_weights(const ModelWeights& weights, const std::filesystem::path& path);
ModelWeights load_weights(const std::filesystem::path& path);

// Training ---------------------------------------------------------------

struct TrainConfig {
  double initial_lr = 1e-4;
  double lr_drop_factor = 5.0;
  int lr_drop_period_epochs = 5;
  int epochs = 30;
  int batch_size = 1;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t shuffle_seed = 1;
  std::uint64_t init_seed = 1;

  void validate() const;
  // Learning rate for 1-based epoch number.
  double lr_for_epoch(int epoch) const noexcept;
};

nlohmann::json to_json(const TrainConfig& cfg);
TrainConfig train_config_from_json(const nlohmann::json& j);

struct TrainingExample {
  RealImage input;
  OrientationEncoding target;
  OrientationMap fo;  // ground truth, used for the validation OE
};

struct EpochRecord {
  int epoch = 0;  // 1-based
  double lr = 0.0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_oe = 0.0;
};

struct Evaluation {
  double loss = 0.0;
  double oe = 0.0;
};

struct TrainResult {
  ModelWeights best;
  int best_epoch = 0;
  Evaluation initial;  // validation metrics of the untrained network
  std::vector<EpochRecord> history;
};

// Mean loss and mean orientation error (no border exclusion) over a set.
Evaluation evaluate(const ModelWeights& weights, const std::vector<TrainingExample>& set);

using EpochCallback = std::function<void(const EpochRecord&)>;

TrainResult train(const std::vector<TrainingExample>& train_set,
                  const std::vector<TrainingExample>& val_set, const NetworkConfig& net_cfg,
                  const TrainConfig& train_cfg, const EpochCallback& on_epoch = {});

// Start from existing weights instead of a fresh build.
TrainResult train_from(ModelWeights initial, const std::vector<TrainingExample>& train_set,
                       const std::vector<TrainingExample>& val_set, const TrainConfig& train_cfg,
                       const EpochCallback& on_epoch = {});

nlohmann::json to_json(const EpochRecord& r);

}  // namespace fringe::deep
