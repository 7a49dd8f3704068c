#pragma once

#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "fringeproc/image.hpp"
#include "fringeproc/maps.hpp"

namespace fringe::metrics {

struct OrientationError {
  double oe = 0.0;
  std::size_t count = 0;         // pixels evaluated
  double valid_fraction = 0.0;   // count / pixels inside the border margin
};

// Sample standard deviation (denominator count - 1) of sin(FO - FO_ref) over
// pixels valid in both maps and outside `exclude_border`. Zero whenever the
// difference is a constant, in particular an integer multiple of pi.
OrientationError orientation_error_detail(const OrientationMap& fo, const OrientationMap& ref,
                                          std::size_t exclude_border = 0);

double orientation_error(const OrientationMap& fo, const OrientationMap& ref,
                         std::size_t exclude_border = 0);

struct ChannelRmse {
  double rmse_sin = 0.0;
  double rmse_cos = 0.0;
};

ChannelRmse rmse_channels(const OrientationEncoding& pred, const OrientationEncoding& target);

// |pred.sin2 - target.sin2| per pixel.
RealImage sin_error_map(const OrientationEncoding& pred, const OrientationEncoding& target);

// |sin(2 FO) - sin(2 FO_ref)|; zero where either map is invalid.
RealImage orientation_sin_error_map(const OrientationMap& fo, const OrientationMap& ref);

// RMS of (phase - ref) after subtracting its mean over the interior.
double rmse_phase(const RealImage& phase, const RealImage& ref, std::size_t exclude_border = 0);

struct EvalReport {
  std::string method;
  std::optional<double> orientation_error;
  std::optional<double> rmse_sin;
  std::optional<double> rmse_cos;
  std::optional<double> rmse_phase;
  std::size_t excluded_border = 0;
  double valid_pixel_fraction = 1.0;

  nlohmann::json to_json() const;
};

}  // namespace fringe::metrics
