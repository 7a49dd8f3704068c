#include "fringeproc/metrics.hpp"

#include <cmath>

namespace fringe::metrics {

OrientationError orientation_error_detail(const OrientationMap& fo, const OrientationMap& ref,
                                          std::size_t exclude_border) {
  require_same_shape(fo.angles, ref.angles, "orientation_error");
  require_same_shape(fo.angles, fo.valid, "orientation_error");
  require_same_shape(ref.angles, ref.valid, "orientation_error");
  const auto in = interior(fo.rows(), fo.cols(), exclude_border);
  if (in.count() == 0) throw InvalidArgument("orientation_error: border removes every pixel");

  // Two passes: mean, then centered sum of squares.
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t r = in.r0; r < in.r1; ++r) {
    for (std::size_t c = in.c0; c < in.c1; ++c) {
      if (!fo.valid(r, c) || !ref.valid(r, c)) continue;
      sum += std::sin(fo.angles(r, c) - ref.angles(r, c));
      ++n;
    }
  }
  if (n < 2) throw InvalidArgument("orientation_error: fewer than two valid pixels");
  const double mu = sum / static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t r = in.r0; r < in.r1; ++r) {
    for (std::size_t c = in.c0; c < in.c1; ++c) {
      if (!fo.valid(r, c) || !ref.valid(r, c)) continue;
      const double d = std::sin(fo.angles(r, c) - ref.angles(r, c)) - mu;
      ss += d * d;
    }
  }
  OrientationError out;
  out.oe = std::sqrt(ss / static_cast<double>(n - 1));
  out.count = n;
  out.valid_fraction = static_cast<double>(n) / static_cast<double>(in.count());
  return out;
}

double orientation_error(const OrientationMap& fo, const OrientationMap& ref,
                         std::size_t exclude_border) {
  return orientation_error_detail(fo, ref, exclude_border).oe;
}

ChannelRmse rmse_channels(const OrientationEncoding& pred, const OrientationEncoding& target) {
  require_same_shape(pred.sin2, target.sin2, "rmse_channels");
  require_same_shape(pred.cos2, target.cos2, "rmse_channels");
  if (pred.sin2.empty()) throw InvalidArgument("rmse_channels: empty maps");
  double ss = 0.0, sc = 0.0;
  for (std::size_t i = 0; i < pred.sin2.size(); ++i) {
    const double ds = pred.sin2[i] - target.sin2[i];
    const double dc = pred.cos2[i] - target.cos2[i];
    ss += ds * ds;
    sc += dc * dc;
  }
  const auto n = static_cast<double>(pred.sin2.size());
  return {std::sqrt(ss / n), std::sqrt(sc / n)};
}

RealImage sin_error_map(const OrientationEncoding& pred, const OrientationEncoding& target) {
  require_same_shape(pred.sin2, target.sin2, "sin_error_map");
  RealImage out(pred.rows(), pred.cols());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::abs(pred.sin2[i] - target.sin2[i]);
  return out;
}

RealImage orientation_sin_error_map(const OrientationMap& fo, const OrientationMap& ref) {
  require_same_shape(fo.angles, ref.angles, "orientation_sin_error_map");
  RealImage out(fo.rows(), fo.cols(), 0.0);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!fo.valid[i] || !ref.valid[i]) continue;
    out[i] = std::abs(std::sin(2.0 * fo.angles[i]) - std::sin(2.0 * ref.angles[i]));
  }
  return out;
}

double rmse_phase(const RealImage& phase, const RealImage& ref, std::size_t exclude_border) {
  require_same_shape(phase, ref, "rmse_phase");
  const auto in = interior(phase.rows(), phase.cols(), exclude_border);
  if (in.count() == 0) throw InvalidArgument("rmse_phase: border removes every pixel");
  double sum = 0.0;
  for (std::size_t r = in.r0; r < in.r1; ++r)
    for (std::size_t c = in.c0; c < in.c1; ++c) sum += phase(r, c) - ref(r, c);
  const double piston = sum / static_cast<double>(in.count());
  double ss = 0.0;
  for (std::size_t r = in.r0; r < in.r1; ++r) {
    for (std::size_t c = in.c0; c < in.c1; ++c) {
      const double d = phase(r, c) - ref(r, c) - piston;
      ss += d * d;
    }
  }
  return std::sqrt(ss / static_cast<double>(in.count()));
}

nlohmann::json EvalReport::to_json() const {
  nlohmann::json j;
  j["method"] = method;
  j["orientation_error"] = orientation_error ? nlohmann::json(*orientation_error) : nlohmann::json(nullptr);
  j["rmse_sin"] = rmse_sin ? nlohmann::json(*rmse_sin) : nlohmann::json(nullptr);
  j["rmse_cos"] = rmse_cos ? nlohmann::json(*rmse_cos) : nlohmann::json(nullptr);
  j["rmse_phase"] = rmse_phase ? nlohmann::json(*rmse_phase) : nlohmann::json(nullptr);
  j["excluded_border"] = excluded_border;
  j["valid_pixel_fraction"] = valid_pixel_fraction;
  return j;
}

}  // namespace fringe::metrics
