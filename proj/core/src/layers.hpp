#pragma once

// Building blocks for the orientation network. Activations are dense
// channel-major (c, y, x) arrays.

#include <cstddef>
#include <cstdint>
#include <vector>

namespace fringe::deep::layers {

struct Activation {
  int channels = 0;
  int height = 0;
  int width = 0;
  std::vector<double> data;

  Activation() = default;
  Activation(int c, int h, int w) : channels(c), height(h), width(w), data(std::size_t(c) * h * w) {}

  std::size_t plane() const noexcept { return std::size_t(height) * width; }
  double* channel(int c) noexcept { return data.data() + plane() * c; }
  const double* channel(int c) const noexcept { return data.data() + plane() * c; }
};

// Same-padded k x k convolution. `weight` is out x in x k x k, row-major.
Activation conv_forward(const Activation& in, const double* weight, const double* bias,
                        int out_channels, int kernel);

// Accumulates into grad_weight / grad_bias. Fills grad_in when non-null.
void conv_backward(const Activation& in, const Activation& grad_out, const double* weight,
                   int kernel, double* grad_weight, double* grad_bias, Activation* grad_in);

void relu_inplace(Activation& a) noexcept;

// grad *= (activation > 0)
void relu_backward_inplace(Activation& grad, const Activation& activation) noexcept;

// 2x2 / stride 2. `argmax` receives the flat source index of every output.
Activation maxpool_forward(const Activation& in, std::vector<std::uint32_t>* argmax);
Activation maxpool_backward(const Activation& grad_out, const std::vector<std::uint32_t>& argmax,
                            int in_height, int in_width);

// Nearest-neighbour upsample by `factor`; the gradient is the block sum.
Activation upsample_forward(const Activation& in, int factor);
Activation upsample_backward(const Activation& grad_out, int factor);

}  // namespace fringe::deep::layers
