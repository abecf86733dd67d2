#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "phm/error.hpp"
#include "phm/grid.hpp"

namespace phm {

// Per-joint 2D response map. Values are clamped to [0,1] on construction;
// non-finite input is rejected.
class Heatmap {
 public:
  Heatmap() = default;
  Heatmap(int width, int height)
      : width_(width), height_(height),
        values_(checked_size(width, height), 0.0) {}
  Heatmap(int width, int height, std::vector<double> values)
      : width_(width), height_(height), values_(std::move(values)) {
    if (values_.size() != checked_size(width, height))
      throw Error(ErrorKind::invalid_argument,
                  "heatmap value count does not match dims");
    for (double& v : values_) {
      if (!std::isfinite(v))
        throw Error(ErrorKind::invalid_argument, "heatmap value not finite");
      v = std::clamp(v, 0.0, 1.0);
    }
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return values_.size(); }

  double at(int x, int y) const { return values_[idx(x, y)]; }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }

  // Clamping writer; keeps the invariant without re-validating the buffer.
  void set(int x, int y, double v) { values_[idx(x, y)] = std::clamp(v, 0.0, 1.0); }
  void set(std::size_t i, double v) { values_[i] = std::clamp(v, 0.0, 1.0); }

  double max_value() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, v);
    return m;
  }

  bool same_dims(const Heatmap& o) const {
    return width_ == o.width_ && height_ == o.height_;
  }

 private:
  static std::size_t checked_size(int w, int h) {
    if (w < 1 || h < 1)
      throw Error(ErrorKind::invalid_argument, "heatmap dims must be >= 1");
    return static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  }
  std::size_t idx(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
};

// Ordered per-joint heatmaps, all with identical dimensions.
class HeatmapSet {
 public:
  HeatmapSet() = default;
  explicit HeatmapSet(std::vector<Heatmap> joints) : joints_(std::move(joints)) {
    if (joints_.empty())
      throw Error(ErrorKind::invalid_argument, "heatmap set needs >= 1 joint");
    for (const Heatmap& h : joints_)
      if (!h.same_dims(joints_.front()))
        throw Error(ErrorKind::dim_mismatch, "heatmap set dims not uniform");
  }
  HeatmapSet(int joints, int width, int height)
      : joints_(check_joints(joints), Heatmap(width, height)) {}

  int joint_count() const { return static_cast<int>(joints_.size()); }
  int width() const { return joints_.front().width(); }
  int height() const { return joints_.front().height(); }

  Heatmap& operator[](int j) { return joints_[j]; }
  const Heatmap& operator[](int j) const { return joints_[j]; }

  auto begin() const { return joints_.begin(); }
  auto end() const { return joints_.end(); }

 private:
  static int check_joints(int j) {
    if (j < 1) throw Error(ErrorKind::invalid_argument, "need >= 1 joint");
    return j;
  }
  std::vector<Heatmap> joints_;
};

struct Keypoint {
  double x = 0.0;
  double y = 0.0;
  double confidence = 0.0;
  bool valid = false;
};

using KeypointSet = std::vector<Keypoint>;

// Gaussian bump used both to encode ground truth and to refine pseudo
// heatmaps: value(p) = amplitude * exp(-|p - center|^2 / (2 sigma^2)).
// Centers outside the grid are allowed (only the tail is rendered).
inline Heatmap render_gaussian(double cx, double cy, double sigma,
                               int width, int height, double amplitude = 1.0) {
  if (sigma <= 0.0)
    throw Error(ErrorKind::invalid_argument, "sigma must be positive");
  if (width < 1 || height < 1)
    throw Error(ErrorKind::invalid_argument, "dims must be >= 1");
  if (!(amplitude > 0.0) || amplitude > 1.0)
    throw Error(ErrorKind::invalid_argument, "amplitude must be in (0, 1]");

  Heatmap out(width, height);
  const double inv = 1.0 / (2.0 * sigma * sigma);
  // Only a 5-sigma box matters; the tail beyond it is < 4e-6.
  const double r = 5.0 * sigma;
  const int x0 = std::max(0, static_cast<int>(std::floor(cx - r)));
  const int x1 = std::min(width - 1, static_cast<int>(std::ceil(cx + r)));
  const int y0 = std::max(0, static_cast<int>(std::floor(cy - r)));
  const int y1 = std::min(height - 1, static_cast<int>(std::ceil(cy + r)));
  for (int y = y0; y <= y1; ++y) {
    const double dy = y - cy;
    for (int x = x0; x <= x1; ++x) {
      const double dx = x - cx;
      out.set(x, y, amplitude * std::exp(-(dx * dx + dy * dy) * inv));
    }
  }
  return out;
}

// Adds a Gaussian into an unclamped grid (feature rendering).
inline void add_gaussian(Grid& g, double cx, double cy, double sigma,
                         double amplitude) {
  const double inv = 1.0 / (2.0 * sigma * sigma);
  const double r = 5.0 * sigma;
  const int x0 = std::max(0, static_cast<int>(std::floor(cx - r)));
  const int x1 = std::min(g.width() - 1, static_cast<int>(std::ceil(cx + r)));
  const int y0 = std::max(0, static_cast<int>(std::floor(cy - r)));
  const int y1 = std::min(g.height() - 1, static_cast<int>(std::ceil(cy + r)));
  for (int y = y0; y <= y1; ++y) {
    const double dy = y - cy;
    for (int x = x0; x <= x1; ++x) {
      const double dx = x - cx;
      g.at(x, y) += amplitude * std::exp(-(dx * dx + dy * dy) * inv);
    }
  }
}

// Integer argmax decode. Ties break to the lowest row-major index; an
// all-zero map yields an invalid keypoint with confidence 0. When
// subpixel_refine is set, the peak is nudged 0.25 px toward the larger
// neighbour along each axis (quarter-offset scheme).
inline Keypoint argmax_decode(const Heatmap& hm, bool subpixel_refine = false) {
  std::size_t best = 0;
  double best_v = hm[0];
  for (std::size_t i = 1; i < hm.size(); ++i) {
    if (hm[i] > best_v) {
      best_v = hm[i];
      best = i;
    }
  }
  if (best_v <= 0.0) return Keypoint{};  // invalid, confidence 0

  const int px = static_cast<int>(best % hm.width());
  const int py = static_cast<int>(best / hm.width());
  double x = px, y = py;
  if (subpixel_refine) {
    auto v = [&](int xx, int yy) {
      return (xx >= 0 && yy >= 0 && xx < hm.width() && yy < hm.height())
                 ? hm.at(xx, yy)
                 : 0.0;
    };
    const double dx = v(px + 1, py) - v(px - 1, py);
    const double dy = v(px, py + 1) - v(px, py - 1);
    if (dx != 0.0) x += (dx > 0 ? 0.25 : -0.25);
    if (dy != 0.0) y += (dy > 0 ? 0.25 : -0.25);
  }
  return Keypoint{x, y, best_v, true};
}

inline KeypointSet decode_keypoints(const HeatmapSet& maps,
                                    bool subpixel_refine = false) {
  KeypointSet out;
  out.reserve(maps.joint_count());
  for (const Heatmap& h : maps) out.push_back(argmax_decode(h, subpixel_refine));
  return out;
}

}  // namespace phm
