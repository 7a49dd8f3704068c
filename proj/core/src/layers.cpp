#include "layers.hpp"

#define EIGEN_DONT_PARALLELIZE
#include <Eigen/Core>

#include <algorithm>
#include <limits>

namespace fringe::deep::layers {
namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapMatrix = Eigen::Map<RowMatrix>;
using ConstMapMatrix = Eigen::Map<const RowMatrix>;

// The convolution is evaluated as a sum over kernel taps: for tap (dy, dx)
// the input shifted by that offset (zero outside the image) is multiplied by
// the out x in slice of the kernel for that tap.

// shifted(c, y, x) = in(c, y + dy, x + dx), zero outside.
void shift_into(const Activation& in, int dy, int dx, RowMatrix& out) {
  const int h = in.height;
  const int w = in.width;
  out.resize(in.channels, static_cast<Eigen::Index>(in.plane()));
  out.setZero();
  const int y0 = std::max(0, -dy);
  const int y1 = std::min(h, h - dy);
  const int x0 = std::max(0, -dx);
  const int x1 = std::min(w, w - dx);
  if (y0 >= y1 || x0 >= x1) return;
  for (int c = 0; c < in.channels; ++c) {
    const double* src = in.channel(c);
    double* dst = out.row(c).data();
    for (int y = y0; y < y1; ++y) {
      std::copy(src + std::size_t(y + dy) * w + (x0 + dx), src + std::size_t(y + dy) * w + (x1 + dx),
                dst + std::size_t(y) * w + x0);
    }
  }
}

// grad_in(c, y + dy, x + dx) += t(c, y, x) where inside.
void unshift_add(const RowMatrix& t, int dy, int dx, Activation& grad_in) {
  const int h = grad_in.height;
  const int w = grad_in.width;
  const int y0 = std::max(0, -dy);
  const int y1 = std::min(h, h - dy);
  const int x0 = std::max(0, -dx);
  const int x1 = std::min(w, w - dx);
  if (y0 >= y1 || x0 >= x1) return;
  for (int c = 0; c < grad_in.channels; ++c) {
    const double* src = t.row(c).data();
    double* dst = grad_in.channel(c);
    for (int y = y0; y < y1; ++y) {
      const double* s = src + std::size_t(y) * w;
      double* d = dst + std::size_t(y + dy) * w + dx;
      for (int x = x0; x < x1; ++x) d[x] += s[x];
    }
  }
}

// Out x in matrix of kernel taps at (ky, kx).
RowMatrix tap_matrix(const double* weight, int out_channels, int in_channels, int kernel, int ky,
                     int kx) {
  RowMatrix m(out_channels, in_channels);
  const std::size_t kk = std::size_t(kernel) * kernel;
  for (int o = 0; o < out_channels; ++o)
    for (int i = 0; i < in_channels; ++i)
      m(o, i) = weight[(std::size_t(o) * in_channels + i) * kk + std::size_t(ky) * kernel + kx];
  return m;
}

}  // namespace

Activation conv_forward(const Activation& in, const double* weight, const double* bias,
                        int out_channels, int kernel) {
  Activation out(out_channels, in.height, in.width);
  const auto plane = static_cast<Eigen::Index>(in.plane());
  MapMatrix out_m(out.data.data(), out_channels, plane);
  for (int o = 0; o < out_channels; ++o) out_m.row(o).setConstant(bias[o]);

  const int half = kernel / 2;
  RowMatrix shifted;
  for (int ky = 0; ky < kernel; ++ky) {
    for (int kx = 0; kx < kernel; ++kx) {
      shift_into(in, ky - half, kx - half, shifted);
      const RowMatrix tap = tap_matrix(weight, out_channels, in.channels, kernel, ky, kx);
      out_m.noalias() += tap * shifted;
    }
  }
  return out;
}

void conv_backward(const Activation& in, const Activation& grad_out, const double* weight,
                   int kernel, double* grad_weight, double* grad_bias, Activation* grad_in) {
  const int out_channels = grad_out.channels;
  const int in_channels = in.channels;
  const auto plane = static_cast<Eigen::Index>(in.plane());
  ConstMapMatrix g(grad_out.data.data(), out_channels, plane);

  // Plain loop: Eigen's vectorized sum peels by runtime alignment, which
  // would make the result depend on where the allocator put the buffer.
  for (int o = 0; o < out_channels; ++o) {
    const double* row = grad_out.channel(o);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < plane; ++i) acc += row[i];
    grad_bias[o] += acc;
  }

  if (grad_in != nullptr) {
    *grad_in = Activation(in_channels, in.height, in.width);
  }

  const int half = kernel / 2;
  const std::size_t kk = std::size_t(kernel) * kernel;
  RowMatrix shifted;
  RowMatrix tap_grad;
  RowMatrix back;
  for (int ky = 0; ky < kernel; ++ky) {
    for (int kx = 0; kx < kernel; ++kx) {
      const int dy = ky - half;
      const int dx = kx - half;
      shift_into(in, dy, dx, shifted);
      tap_grad.noalias() = g * shifted.transpose();
      for (int o = 0; o < out_channels; ++o)
        for (int i = 0; i < in_channels; ++i)
          grad_weight[(std::size_t(o) * in_channels + i) * kk + std::size_t(ky) * kernel + kx] +=
              tap_grad(o, i);

      if (grad_in != nullptr) {
        const RowMatrix tap = tap_matrix(weight, out_channels, in_channels, kernel, ky, kx);
        back.noalias() = tap.transpose() * g;
        unshift_add(back, dy, dx, *grad_in);
      }
    }
  }
}

void relu_inplace(Activation& a) noexcept {
  for (double& v : a.data) v = v > 0.0 ? v : 0.0;
}

void relu_backward_inplace(Activation& grad, const Activation& activation) noexcept {
  for (std::size_t i = 0; i < grad.data.size(); ++i) {
    if (!(activation.data[i] > 0.0)) grad.data[i] = 0.0;
  }
}

Activation maxpool_forward(const Activation& in, std::vector<std::uint32_t>* argmax) {
  const int oh = in.height / 2;
  const int ow = in.width / 2;
  Activation out(in.channels, oh, ow);
  if (argmax != nullptr) argmax->assign(out.data.size(), 0);
  std::size_t k = 0;
  for (int c = 0; c < in.channels; ++c) {
    const double* src = in.channel(c);
    const std::size_t base = in.plane() * c;
    for (int y = 0; y < oh; ++y) {
      for (int x = 0; x < ow; ++x, ++k) {
        double best = -std::numeric_limits<double>::infinity();
        std::size_t best_idx = 0;
        for (int dy = 0; dy < 2; ++dy) {
          for (int dx = 0; dx < 2; ++dx) {
            const std::size_t idx = std::size_t(2 * y + dy) * in.width + (2 * x + dx);
            if (src[idx] > best) {
              best = src[idx];
              best_idx = idx;
            }
          }
        }
        out.data[k] = best;
        if (argmax != nullptr) (*argmax)[k] = static_cast<std::uint32_t>(base + best_idx);
      }
    }
  }
  return out;
}

Activation maxpool_backward(const Activation& grad_out, const std::vector<std::uint32_t>& argmax,
                            int in_height, int in_width) {
  Activation grad_in(grad_out.channels, in_height, in_width);
  for (std::size_t k = 0; k < grad_out.data.size(); ++k) grad_in.data[argmax[k]] += grad_out.data[k];
  return grad_in;
}

Activation upsample_forward(const Activation& in, int factor) {
  if (factor == 1) return in;
  Activation out(in.channels, in.height * factor, in.width * factor);
  for (int c = 0; c < in.channels; ++c) {
    const double* src = in.channel(c);
    double* dst = out.channel(c);
    for (int y = 0; y < out.height; ++y) {
      const double* row = src + std::size_t(y / factor) * in.width;
      double* drow = dst + std::size_t(y) * out.width;
      for (int x = 0; x < out.width; ++x) drow[x] = row[x / factor];
    }
  }
  return out;
}

Activation upsample_backward(const Activation& grad_out, int factor) {
  if (factor == 1) return grad_out;
  Activation grad_in(grad_out.channels, grad_out.height / factor, grad_out.width / factor);
  for (int c = 0; c < grad_out.channels; ++c) {
    const double* src = grad_out.channel(c);
    double* dst = grad_in.channel(c);
    for (int y = 0; y < grad_out.height; ++y) {
      const double* row = src + std::size_t(y) * grad_out.width;
      double* drow = dst + std::size_t(y / factor) * grad_in.width;
      for (int x = 0; x < grad_out.width; ++x) drow[x / factor] += row[x];
    }
  }
  return grad_in;
}

}  // namespace fringe::deep::layers
