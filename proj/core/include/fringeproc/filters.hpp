#pragma once

#include <cstddef>
#include <vector>

#include "fringeproc/image.hpp"

namespace fringe {

// Central differences in the interior, one-sided differences on the first
// and last row/column. Output maps have the input's dimensions.
GradientPair gradients(const RealImage& img);

// Normalized 1D Gaussian taps for radius ceil(4*sigma).
std::vector<double> gaussian_kernel(double sigma);

// Separable Gaussian convolution with symmetric (mirror) extension at the
// borders. The operator is symmetric, so the image mean is preserved.
RealImage gaussian_blur(const RealImage& img, double sigma);

// Mean over a w x w window whose offsets run from -(w-1)/2 to w/2,
// clipped at the borders (the divisor is the clipped pixel count).
RealImage box_mean(const RealImage& img, int w);

}  // namespace fringe
