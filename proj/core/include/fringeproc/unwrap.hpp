#pragma once

#include "fringeproc/image.hpp"
#include "fringeproc/maps.hpp"

namespace fringe::unwrap {

// Per-pixel reliability 1 / (H^2 + V^2 + D1^2 + D2^2 + 1e-12) from wrapped
// second differences along the horizontal, vertical and both diagonal
// directions. Pixels on the outer frame have no full neighbourhood and get
// reliability 0.
RealImage reliability_map(const RealImage& wrapped);

// Reliability-sorted region-merging unwrapper. Edges between 4-neighbours
// are processed in order of decreasing summed reliability (ties by edge
// index); each merge shifts the smaller group by the multiple of 2 pi that
// brings the pair within pi of each other. Output differs from the input by
// integer multiples of 2 pi only, anchored so the most reliable pixel keeps
// its input value.
RealImage unwrap_phase_2d(const RealImage& wrapped);

// Minimum valid-pixel fraction accepted by orientation_to_direction.
inline constexpr double kMinOrientationCoverage = 0.99;

// Replace invalid pixels by the angle of the nearest valid pixel (4-connected
// breadth-first distance, ties in scan order). Throws NumericalError when no
// pixel is valid.
RealImage inpaint_nearest(const OrientationMap& fo);

// D = unwrap(2 FO) / 2 reduced mod 2 pi. Throws NumericalError naming the
// coverage when fewer than 99% of pixels are valid.
DirectionMap orientation_to_direction(const OrientationMap& fo);

// FO maps fix the direction only up to a global pi. This picks the branch
// whose mean unit normal (mean sin beta, mean cos beta) points toward +y, or
// toward +x when the y component is under a tenth of the mean's length, and
// returns true when it had to add pi.
bool canonicalize_branch(DirectionMap& beta);

// Add pi to every angle, reduced mod 2 pi.
DirectionMap flip_branch(const DirectionMap& beta);

}  // namespace fringe::unwrap
