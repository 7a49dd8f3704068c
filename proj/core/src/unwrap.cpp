#include "fringeproc/unwrap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <numeric>
#include <sstream>

namespace fringe::unwrap {
namespace {

double gamma(double d) noexcept { return wrap_signed(d); }

// Weighted union-find: a root stores the absolute 2 pi count of its group,
// every other node stores its count relative to its parent.
class OffsetForest {
 public:
  explicit OffsetForest(std::size_t n) : parent_(n), size_(n, 1), offset_(n, 0) {
    std::iota(parent_.begin(), parent_.end(), std::size_t{0});
  }

  // Returns the root and sets `k` to the absolute count of node x.
  std::size_t find(std::size_t x, std::int64_t& k) {
    std::size_t root = x;
    std::int64_t rel = 0;
    while (parent_[root] != root) {
      rel += offset_[root];
      root = parent_[root];
    }
    // Path compression: point every node on the path straight at the root.
    std::int64_t remaining = rel;
    while (parent_[x] != root && x != root) {
      const std::size_t next = parent_[x];
      const std::int64_t own = offset_[x];
      offset_[x] = remaining;
      parent_[x] = root;
      remaining -= own;
      x = next;
    }
    k = rel + offset_[root];
    return root;
  }

  // Shift the group rooted at `moved` by `n` and hang it under `keep`.
  void attach(std::size_t moved, std::size_t keep, std::int64_t n) {
    const std::int64_t new_abs = offset_[moved] + n;
    offset_[moved] = new_abs - offset_[keep];
    parent_[moved] = keep;
    size_[keep] += size_[moved];
  }

  std::size_t size(std::size_t root) const { return size_[root]; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
  std::vector<std::int64_t> offset_;
};

}  // namespace

RealImage reliability_map(const RealImage& wrapped) {
  const std::size_t rows = wrapped.rows();
  const std::size_t cols = wrapped.cols();
  RealImage rel(rows, cols, 0.0);
  if (rows < 3 || cols < 3) return rel;
  for (std::size_t r = 1; r + 1 < rows; ++r) {
    for (std::size_t c = 1; c + 1 < cols; ++c) {
      const double p = wrapped(r, c);
      const double h = gamma(wrapped(r, c - 1) - p) - gamma(p - wrapped(r, c + 1));
      const double v = gamma(wrapped(r - 1, c) - p) - gamma(p - wrapped(r + 1, c));
      const double d1 = gamma(wrapped(r - 1, c - 1) - p) - gamma(p - wrapped(r + 1, c + 1));
      const double d2 = gamma(wrapped(r - 1, c + 1) - p) - gamma(p - wrapped(r + 1, c - 1));
      rel(r, c) = 1.0 / (h * h + v * v + d1 * d1 + d2 * d2 + 1e-12);
    }
  }
  return rel;
}

RealImage unwrap_phase_2d(const RealImage& wrapped) {
  const std::size_t rows = wrapped.rows();
  const std::size_t cols = wrapped.cols();
  const std::size_t n = rows * cols;
  if (n == 0) return wrapped;
  require_finite(wrapped, "unwrap_phase_2d");

  const RealImage rel = reliability_map(wrapped);

  // Edge e < h_count joins (i, i + 1) horizontally; the rest join (i, i + cols).
  struct Edge {
    double weight;
    std::uint32_t a, b;
  };
  std::vector<Edge> edges;
  edges.reserve(2 * n);
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c + 1 < cols; ++c) {
      const std::size_t i = r * cols + c;
      edges.push_back({rel[i] + rel[i + 1], static_cast<std::uint32_t>(i),
                       static_cast<std::uint32_t>(i + 1)});
    }
  for (std::size_t r = 0; r + 1 < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const std::size_t i = r * cols + c;
      edges.push_back({rel[i] + rel[i + cols], static_cast<std::uint32_t>(i),
                       static_cast<std::uint32_t>(i + cols)});
    }
  // Stable sort keeps construction order among equal weights.
  std::stable_sort(edges.begin(), edges.end(),
                   [](const Edge& x, const Edge& y) { return x.weight > y.weight; });

  OffsetForest forest(n);
  for (const auto& e : edges) {
    std::int64_t ka = 0, kb = 0;
    const std::size_t ra = forest.find(e.a, ka);
    const std::size_t rb = forest.find(e.b, kb);
    if (ra == rb) continue;
    const double ua = wrapped[e.a] + kTwoPi * static_cast<double>(ka);
    const double ub = wrapped[e.b] + kTwoPi * static_cast<double>(kb);
    const auto shift = static_cast<std::int64_t>(std::nearbyint((ua - ub) / kTwoPi));
    if (forest.size(ra) >= forest.size(rb)) {
      forest.attach(rb, ra, shift);
    } else {
      forest.attach(ra, rb, -shift);
    }
  }

  const auto anchor = static_cast<std::size_t>(
      std::max_element(rel.begin(), rel.end()) - rel.begin());
  std::int64_t k_anchor = 0;
  forest.find(anchor, k_anchor);

  RealImage out(rows, cols);
  for (std::size_t i = 0; i < n; ++i) {
    std::int64_t k = 0;
    forest.find(i, k);
    out[i] = wrapped[i] + kTwoPi * static_cast<double>(k - k_anchor);
  }
  return out;
}

RealImage inpaint_nearest(const OrientationMap& fo) {
  const std::size_t rows = fo.rows();
  const std::size_t cols = fo.cols();
  require_same_shape(fo.angles, fo.valid, "inpaint_nearest");
  RealImage out = fo.angles;
  std::vector<std::uint8_t> filled(fo.valid.begin(), fo.valid.end());
  std::deque<std::size_t> queue;
  for (std::size_t i = 0; i < out.size(); ++i)
    if (filled[i]) queue.push_back(i);
  if (queue.empty()) throw NumericalError("orientation map has no valid pixel");
  if (queue.size() == out.size()) return out;

  while (!queue.empty()) {
    const std::size_t i = queue.front();
    queue.pop_front();
    const std::size_t r = i / cols;
    const std::size_t c = i % cols;
    const auto visit = [&](std::size_t j) {
      if (filled[j]) return;
      filled[j] = 1;
      out[j] = out[i];
      queue.push_back(j);
    };
    if (r > 0) visit(i - cols);
    if (c > 0) visit(i - 1);
    if (c + 1 < cols) visit(i + 1);
    if (r + 1 < rows) visit(i + cols);
  }
  return out;
}

DirectionMap orientation_to_direction(const OrientationMap& fo) {
  const double coverage = fo.valid_fraction();
  if (coverage < kMinOrientationCoverage) {
    std::ostringstream msg;
    msg << "orientation_to_direction: valid coverage " << coverage * 100.0
        << "% is below the required " << kMinOrientationCoverage * 100.0 << "%";
    throw NumericalError(msg.str());
  }
  RealImage doubled = inpaint_nearest(fo);
  for (double& v : doubled) v *= 2.0;
  RealImage lifted = unwrap_phase_2d(doubled);
  for (double& v : lifted) v = wrap_2pi(0.5 * v);
  return DirectionMap{std::move(lifted)};
}

bool canonicalize_branch(DirectionMap& beta) {
  if (beta.angles.empty()) return false;
  double mx = 0.0, my = 0.0;
  for (double b : beta.angles) {
    mx += std::sin(b);
    my += std::cos(b);
  }
  const double len = std::hypot(mx, my);
  const bool flip = std::abs(my) >= 0.1 * len ? my < 0.0 : mx < 0.0;
  if (flip) beta = flip_branch(beta);
  return flip;
}

DirectionMap flip_branch(const DirectionMap& beta) {
  DirectionMap out = beta;
  for (double& b : out.angles) b = wrap_2pi(b + kPi);
  return out;
}

}  // namespace fringe::unwrap
