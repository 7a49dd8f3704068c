#pragma once

#include "fringeproc/image.hpp"
#include "fringeproc/maps.hpp"

namespace fringe::classic {

// Square window of side w (>= 2). Offsets run from -(w-1)/2 to w/2 and are
// clipped at the image border.
struct WindowSpec {
  int w = 2;

  void validate_for(const RealImage& img) const;
};

// Background removal, amplitude normalization and light denoising:
//   s = img - blur(img, background_sigma)
//   s = s / max(eps, blur(|s|, background_sigma) * pi / 2)
//   out = blur(s, smooth_sigma)
// Input is expected to carry fringes; output is roughly zero-mean with unit
// amplitude.
RealImage prefilter(const RealImage& img, double background_sigma, double smooth_sigma);

// Period of the strongest non-DC spectral peak, in pixels.
double dominant_period(const RealImage& img);

struct PrefilterParams {
  double background_sigma = 0.0;
  double smooth_sigma = 0.5;
};

// background_sigma = 2 * dominant_period(img), smooth_sigma = 0.5.
PrefilterParams default_prefilter_params(const RealImage& img);
RealImage prefilter(const RealImage& img);

// Orientation from the doubled-angle average of a gradient field:
//   (gy^2 - gx^2, 2 gx gy) box-averaged over w x w, FO = atan2(S, C) / 2.
// Averaged magnitude below 1e-9 marks the pixel invalid.
OrientationMap doubled_angle_orientation(const GradientPair& g, const WindowSpec& win);

// Gradient method on (prefiltered) intensities.
OrientationMap gradient_orientation(const RealImage& img, const WindowSpec& win);

// Per-pixel least-squares plane I ~ p0 + p1 x + p2 y over the window; returns
// (p1, p2). Degenerate (collinear) clipped windows yield zero gradients.
GradientPair plane_fit_gradients(const RealImage& img, const WindowSpec& win);

// Combined plane-fit / gradient estimator.
OrientationMap cpfg_orientation(const RealImage& img, const WindowSpec& win);

inline constexpr double kMinAveragedMagnitude = 1e-9;

}  // namespace fringe::classic
