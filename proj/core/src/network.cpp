#include "fringeproc/network.hpp"

#include <cmath>
#include <string>

#include "fringeproc/rng.hpp"
#include "fringeproc/simulate.hpp"
#include "layers.hpp"

namespace fringe::deep {
namespace {

using layers::Activation;

std::string path_prefix(int p) { return "path" + std::to_string(p); }

struct BlockCache {
  Activation input;   // block input x
  Activation hidden;  // relu(conv1(x))
  Activation output;  // relu(x + conv2(hidden))
};

struct PathCache {
  Activation stem;  // relu(input conv), full resolution
  std::vector<Activation> pooled_inputs;
  std::vector<std::vector<std::uint32_t>> argmax;
  std::vector<BlockCache> blocks;
};

struct ForwardCache {
  Activation input;
  std::vector<PathCache> paths;
  Activation concat;
  Activation output;  // 2 channels
};

// Index lookup into ModelWeights::tensors, in tensor_layout order.
struct Slots {
  std::size_t path_base(int p, int blocks) const { return std::size_t(p) * (2 + 4 * blocks); }
};

const double* tensor_ptr(const ModelWeights& w, std::size_t idx) {
  return w.tensors[idx].values.data();
}

Activation to_activation(const RealImage& img) {
  Activation a(1, static_cast<int>(img.rows()), static_cast<int>(img.cols()));
  std::copy(img.begin(), img.end(), a.data.begin());
  return a;
}

Activation run_forward(const ModelWeights& w, const RealImage& img, ForwardCache* cache) {
  const auto& cfg = w.config;
  const int k = cfg.kernel_size;
  const int f = cfg.filters;
  const int blocks = cfg.blocks_per_path;
  const Slots slots;

  Activation input = to_activation(img);
  Activation concat(cfg.paths * f, input.height, input.width);
  if (cache != nullptr) cache->paths.resize(cfg.paths);

  for (int p = 0; p < cfg.paths; ++p) {
    const std::size_t base = slots.path_base(p, blocks);
    Activation x = layers::conv_forward(input, tensor_ptr(w, base), tensor_ptr(w, base + 1), f, k);
    layers::relu_inplace(x);
    PathCache* pc = cache != nullptr ? &cache->paths[p] : nullptr;
    if (pc != nullptr) pc->stem = x;

    for (int level = 0; level < p; ++level) {
      std::vector<std::uint32_t> argmax;
      if (pc != nullptr) pc->pooled_inputs.push_back(x);
      x = layers::maxpool_forward(x, pc != nullptr ? &argmax : nullptr);
      if (pc != nullptr) pc->argmax.push_back(std::move(argmax));
    }

    for (int b = 0; b < blocks; ++b) {
      const std::size_t bb = base + 2 + 4 * std::size_t(b);
      Activation h = layers::conv_forward(x, tensor_ptr(w, bb), tensor_ptr(w, bb + 1), f, k);
      layers::relu_inplace(h);
      Activation y = layers::conv_forward(h, tensor_ptr(w, bb + 2), tensor_ptr(w, bb + 3), f, k);
      for (std::size_t i = 0; i < y.data.size(); ++i) y.data[i] += x.data[i];
      layers::relu_inplace(y);
      if (pc != nullptr) pc->blocks.push_back({std::move(x), std::move(h), y});
      x = std::move(y);
    }

    Activation up = layers::upsample_forward(x, 1 << p);
    std::copy(up.data.begin(), up.data.end(), concat.channel(p * f));
  }

  const std::size_t head = slots.path_base(cfg.paths, blocks);
  Activation out = layers::conv_forward(concat, tensor_ptr(w, head), tensor_ptr(w, head + 1), 2, k);
  if (cache != nullptr) {
    cache->input = std::move(input);
    cache->concat = std::move(concat);
    cache->output = out;
  }
  return out;
}

OrientationEncoding to_encoding(const Activation& out) {
  const auto rows = static_cast<std::size_t>(out.height);
  const auto cols = static_cast<std::size_t>(out.width);
  OrientationEncoding enc{RealImage(rows, cols), RealImage(rows, cols)};
  std::copy(out.channel(0), out.channel(0) + out.plane(), enc.sin2.begin());
  std::copy(out.channel(1), out.channel(1) + out.plane(), enc.cos2.begin());
  return enc;
}

}  // namespace

void NetworkConfig::validate() const {
  if (paths < 2 || paths > 5) {
    throw InvalidArgument("network paths must lie in [2, 5], got " + std::to_string(paths));
  }
  if (filters < 1) throw InvalidArgument("network filters must be positive");
  if (blocks_per_path < 1) throw InvalidArgument("blocks_per_path must be >= 1");
  if (kernel_size < 1 || kernel_size % 2 == 0) {
    throw InvalidArgument("kernel_size must be a positive odd integer");
  }
}

nlohmann::json to_json(const NetworkConfig& cfg) {
  return {{"paths", cfg.paths},
          {"filters", cfg.filters},
          {"blocks_per_path", cfg.blocks_per_path},
          {"kernel_size", cfg.kernel_size}};
}

NetworkConfig network_config_from_json(const nlohmann::json& j) {
  NetworkConfig cfg;
  cfg.paths = j.at("paths").get<int>();
  cfg.filters = j.at("filters").get<int>();
  cfg.blocks_per_path = j.at("blocks_per_path").get<int>();
  cfg.kernel_size = j.value("kernel_size", 3);
  return cfg;
}

std::size_t TensorSpec::numel() const noexcept {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

std::vector<TensorSpec> tensor_layout(const NetworkConfig& cfg) {
  cfg.validate();
  const auto k = static_cast<std::size_t>(cfg.kernel_size);
  const auto f = static_cast<std::size_t>(cfg.filters);
  std::vector<TensorSpec> specs;
  for (int p = 0; p < cfg.paths; ++p) {
    const auto pre = path_prefix(p);
    specs.push_back({pre + ".input.weight", {f, 1, k, k}});
    specs.push_back({pre + ".input.bias", {f}});
    for (int b = 0; b < cfg.blocks_per_path; ++b) {
      const auto bp = pre + ".block" + std::to_string(b);
      specs.push_back({bp + ".conv1.weight", {f, f, k, k}});
      specs.push_back({bp + ".conv1.bias", {f}});
      specs.push_back({bp + ".conv2.weight", {f, f, k, k}});
      specs.push_back({bp + ".conv2.bias", {f}});
    }
  }
  const auto concat = static_cast<std::size_t>(cfg.paths) * f;
  specs.push_back({"head.weight", {2, concat, k, k}});
  specs.push_back({"head.bias", {2}});
  return specs;
}

const Tensor& ModelWeights::at(std::string_view name) const {
  for (const auto& t : tensors)
    if (t.name == name) return t;
  throw InvalidArgument("no tensor named '" + std::string(name) + "'");
}

Tensor& ModelWeights::at(std::string_view name) {
  return const_cast<Tensor&>(static_cast<const ModelWeights&>(*this).at(name));
}

std::size_t ModelWeights::parameter_count() const noexcept {
  std::size_t n = 0;
  for (const auto& t : tensors) n += t.numel();
  return n;
}

void ModelWeights::audit() const {
  const auto specs = tensor_layout(config);
  if (specs.size() != tensors.size()) {
    throw FormatError(FormatErrc::shape_audit,
                      "config implies " + std::to_string(specs.size()) + " tensors, found " +
                          std::to_string(tensors.size()));
  }
  for (std::size_t i = 0; i < specs.size(); ++i) {
    const auto& t = tensors[i];
    if (t.name != specs[i].name || t.shape != specs[i].shape || t.numel() != specs[i].numel()) {
      throw FormatError(FormatErrc::shape_audit, "tensor " + std::to_string(i) + " ('" + t.name +
                                                     "') does not match the config layout ('" +
                                                     specs[i].name + "')");
    }
    for (double v : t.values) {
      if (!std::isfinite(v)) {
        throw FormatError(FormatErrc::non_finite, "tensor '" + t.name + "' is not finite");
      }
    }
  }
}

ModelWeights build_network(const NetworkConfig& cfg, std::uint64_t init_seed) {
  const auto specs = tensor_layout(cfg);
  ModelWeights w;
  w.config = cfg;
  Rng rng(init_seed);
  for (const auto& spec : specs) {
    Tensor t{spec.name, spec.shape, std::vector<double>(spec.numel(), 0.0)};
    if (spec.shape.size() == 4) {
      const double receptive = static_cast<double>(spec.shape[2] * spec.shape[3]);
      const double fan_in = static_cast<double>(spec.shape[1]) * receptive;
      const double fan_out = static_cast<double>(spec.shape[0]) * receptive;
      const double limit = std::sqrt(6.0 / (fan_in + fan_out));
      for (double& v : t.values) v = rng.uniform(-limit, limit);
    }
    w.tensors.push_back(std::move(t));
  }
  return w;
}

std::vector<Tensor> zeros_like(const ModelWeights& w) {
  std::vector<Tensor> out;
  out.reserve(w.tensors.size());
  for (const auto& t : w.tensors) out.push_back({t.name, t.shape, std::vector<double>(t.numel())});
  return out;
}

void check_input_shape(const NetworkConfig& cfg, const RealImage& img) {
  const auto factor = cfg.downsample_factor();
  if (img.rows() == 0 || img.cols() == 0 || img.rows() % factor != 0 ||
      img.cols() % factor != 0) {
    throw ShapeError("network input " + std::to_string(img.rows()) + "x" +
                     std::to_string(img.cols()) + " is not divisible by " +
                     std::to_string(factor));
  }
  require_finite(img, "network input");
}

OrientationEncoding forward(const ModelWeights& weights, const RealImage& img) {
  check_input_shape(weights.config, img);
  return to_encoding(run_forward(weights, img, nullptr));
}

double loss_mse(const OrientationEncoding& pred, const OrientationEncoding& target) {
  require_same_shape(pred.sin2, target.sin2, "loss_mse");
  require_same_shape(pred.cos2, target.cos2, "loss_mse");
  require_same_shape(pred.sin2, pred.cos2, "loss_mse");
  double sum = 0.0;
  for (std::size_t i = 0; i < pred.sin2.size(); ++i) {
    const double ds = pred.sin2[i] - target.sin2[i];
    const double dc = pred.cos2[i] - target.cos2[i];
    sum += ds * ds + dc * dc;
  }
  return sum / (2.0 * static_cast<double>(pred.sin2.size()));
}

BackwardResult backward(const ModelWeights& w, const RealImage& img,
                        const OrientationEncoding& target) {
  check_input_shape(w.config, img);
  require_same_shape(img, target.sin2, "backward");
  require_same_shape(img, target.cos2, "backward");

  ForwardCache cache;
  run_forward(w, img, &cache);
  const auto& cfg = w.config;
  const int k = cfg.kernel_size;
  const int f = cfg.filters;
  const int blocks = cfg.blocks_per_path;
  const Slots slots;

  BackwardResult result;
  result.grads = zeros_like(w);
  auto grad_ptr = [&](std::size_t idx) { return result.grads[idx].values.data(); };

  // dL/dpred = 2 (pred - target) / N, N = 2 * rows * cols.
  const Activation& out = cache.output;
  const double n = static_cast<double>(out.data.size());
  Activation grad_out(2, out.height, out.width);
  double loss = 0.0;
  for (std::size_t i = 0; i < out.plane(); ++i) {
    const double ds = out.data[i] - target.sin2[i];
    const double dc = out.data[out.plane() + i] - target.cos2[i];
    loss += ds * ds + dc * dc;
    grad_out.data[i] = 2.0 * ds / n;
    grad_out.data[out.plane() + i] = 2.0 * dc / n;
  }
  result.loss = loss / n;

  const std::size_t head = slots.path_base(cfg.paths, blocks);
  Activation grad_concat;
  layers::conv_backward(cache.concat, grad_out, tensor_ptr(w, head), k, grad_ptr(head),
                        grad_ptr(head + 1), &grad_concat);

  for (int p = 0; p < cfg.paths; ++p) {
    const std::size_t base = slots.path_base(p, blocks);
    PathCache& pc = cache.paths[p];

    Activation grad_up(f, grad_concat.height, grad_concat.width);
    std::copy(grad_concat.channel(p * f), grad_concat.channel(p * f) + grad_up.data.size(),
              grad_up.data.begin());
    Activation g = layers::upsample_backward(grad_up, 1 << p);

    for (int b = blocks - 1; b >= 0; --b) {
      const std::size_t bb = base + 2 + 4 * std::size_t(b);
      const BlockCache& bc = pc.blocks[b];
      layers::relu_backward_inplace(g, bc.output);
      Activation grad_hidden;
      layers::conv_backward(bc.hidden, g, tensor_ptr(w, bb + 2), k, grad_ptr(bb + 2),
                            grad_ptr(bb + 3), &grad_hidden);
      layers::relu_backward_inplace(grad_hidden, bc.hidden);
      Activation grad_x;
      layers::conv_backward(bc.input, grad_hidden, tensor_ptr(w, bb), k, grad_ptr(bb),
                            grad_ptr(bb + 1), &grad_x);
      for (std::size_t i = 0; i < g.data.size(); ++i) g.data[i] += grad_x.data[i];
    }

    for (int level = p - 1; level >= 0; --level) {
      const Activation& src = pc.pooled_inputs[level];
      g = layers::maxpool_backward(g, pc.argmax[level], src.height, src.width);
    }

    layers::relu_backward_inplace(g, pc.stem);
    layers::conv_backward(cache.input, g, tensor_ptr(w, base), k, grad_ptr(base),
                          grad_ptr(base + 1), nullptr);
  }
  return result;
}

AdamState make_adam_state(const ModelWeights& w) {
  AdamState s;
  for (const auto& t : w.tensors) {
    s.m.emplace_back(t.numel(), 0.0);
    s.v.emplace_back(t.numel(), 0.0);
  }
  return s;
}

void adam_step(ModelWeights& weights, const std::vector<Tensor>& grads, AdamState& state,
               double lr) {
  if (grads.size() != weights.tensors.size() || state.m.size() != weights.tensors.size() ||
      state.v.size() != weights.tensors.size()) {
    throw ShapeError("adam_step: tensor count mismatch");
  }
  state.step += 1;
  const double t = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(state.beta1, t);
  const double c2 = 1.0 - std::pow(state.beta2, t);
  for (std::size_t i = 0; i < grads.size(); ++i) {
    auto& w = weights.tensors[i].values;
    const auto& g = grads[i].values;
    auto& m = state.m[i];
    auto& v = state.v[i];
    if (g.size() != w.size() || m.size() != w.size() || v.size() != w.size()) {
      throw ShapeError("adam_step: tensor '" + weights.tensors[i].name + "' size mismatch");
    }
    for (std::size_t j = 0; j < w.size(); ++j) {
      m[j] = state.beta1 * m[j] + (1.0 - state.beta1) * g[j];
      v[j] = state.beta2 * v[j] + (1.0 - state.beta2) * g[j] * g[j];
      const double m_hat = m[j] / c1;
      const double v_hat = v[j] / c2;
      w[j] -= lr * m_hat / (std::sqrt(v_hat) + state.eps);
    }
  }
}

OrientationMap infer_orientation(const ModelWeights& weights, const RealImage& img) {
  auto enc = forward(weights, img);
  for (std::size_t i = 0; i < enc.sin2.size(); ++i) {
    const double n2 = enc.sin2[i] * enc.sin2[i] + enc.cos2[i] * enc.cos2[i];
    if (n2 < sim::kMinEncodingNorm2) continue;
    const double inv = 1.0 / std::sqrt(n2);
    enc.sin2[i] *= inv;
    enc.cos2[i] *= inv;
  }
  return sim::decode_orientation(enc);
}

}  // namespace fringe::deep
