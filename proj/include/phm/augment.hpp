#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "phm/affine.hpp"
#include "phm/error.hpp"
#include "phm/grid.hpp"
#include "phm/heatmap.hpp"
#include "phm/rng.hpp"

namespace phm {

// Inverse-CDF sampler for Beta(alpha, beta) on a 4096-bin tabulated CDF.
// The pdf is integrated with the midpoint rule and normalized, which keeps
// the table dependency-free and handles the integrable endpoint
// singularities of alpha, beta < 1. Quantile error stays well under 1e-3.
class BetaTable {
 public:
  static constexpr int kBins = 4096;

  BetaTable(double alpha, double beta) {
    if (!(alpha > 0.0) || !(beta > 0.0))
      throw Error(ErrorKind::invalid_argument, "beta shape params must be > 0");
    cdf_.resize(kBins + 1);
    cdf_[0] = 0.0;
    const double dx = 1.0 / kBins;
    for (int i = 0; i < kBins; ++i) {
      const double x = (i + 0.5) * dx;
      const double p = std::pow(x, alpha - 1.0) * std::pow(1.0 - x, beta - 1.0);
      cdf_[i + 1] = cdf_[i] + p * dx;
    }
    const double total = cdf_.back();
    for (double& c : cdf_) c /= total;
  }

  // Quantile by binary search + linear interpolation within the bin.
  double quantile(double u) const {
    u = std::clamp(u, 0.0, 1.0);
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    int hi = static_cast<int>(it - cdf_.begin());
    if (hi <= 0) return 0.0;
    if (hi > kBins) hi = kBins;
    const int lo = hi - 1;
    const double span = cdf_[hi] - cdf_[lo];
    const double frac = span > 0.0 ? (u - cdf_[lo]) / span : 0.0;
    return (lo + frac) / kBins;
  }

  double sample(Rng& rng) const { return quantile(rng.unit()); }

 private:
  std::vector<double> cdf_;
};

enum class ScaleLaw { uniform, beta };

// Affine augmentation policy: rotation and scale about the grid center,
// plus optional translation jitter.
struct AugmentPolicy {
  double rotation_range_deg = 30.0;  // rotation ~ U[-r, r]
  ScaleLaw scale_law = ScaleLaw::uniform;
  double scale_min = 0.75;
  double scale_max = 1.25;
  double beta_alpha = 0.75;  // used when scale_law == beta
  double beta_beta = 0.75;
  double translation_jitter_px = 0.0;

  static AugmentPolicy weak() { return {}; }

  static AugmentPolicy strong() {
    AugmentPolicy p;
    p.rotation_range_deg = 60.0;
    p.scale_law = ScaleLaw::beta;
    p.scale_min = 0.5;
    p.scale_max = 1.5;
    return p;
  }
};

namespace detail {
// Single-entry per-thread cache; policies use one (alpha, beta) throughout.
inline const BetaTable& beta_table(double alpha, double beta) {
  thread_local double ca = -1.0, cb = -1.0;
  thread_local std::unique_ptr<BetaTable> table;
  if (!table || ca != alpha || cb != beta) {
    table = std::make_unique<BetaTable>(alpha, beta);
    ca = alpha;
    cb = beta;
  }
  return *table;
}
}  // namespace detail

// Draw order is fixed (rotation, scale, jitter) so sequences are stable
// under a fixed seed.
inline AffineTransform sample_transform(const AugmentPolicy& policy, Rng& rng,
                                        int grid_width, int grid_height) {
  const double cx = (grid_width - 1) * 0.5;
  const double cy = (grid_height - 1) * 0.5;
  const double rot_deg =
      rng.uniform(-policy.rotation_range_deg, policy.rotation_range_deg);
  double scale;
  if (policy.scale_law == ScaleLaw::uniform) {
    scale = rng.uniform(policy.scale_min, policy.scale_max);
  } else {
    const double u = detail::beta_table(policy.beta_alpha, policy.beta_beta)
                         .sample(rng);
    scale = policy.scale_min + (policy.scale_max - policy.scale_min) * u;
  }
  double tx = 0.0, ty = 0.0;
  if (policy.translation_jitter_px > 0.0) {
    tx = rng.uniform(-policy.translation_jitter_px, policy.translation_jitter_px);
    ty = rng.uniform(-policy.translation_jitter_px, policy.translation_jitter_px);
  }
  const AffineTransform rot =
      AffineTransform::rotation_about(rot_deg * 0.017453292519943295, cx, cy);
  const AffineTransform sc = AffineTransform::scale_about(scale, cx, cy);
  AffineTransform t = compose(sc, rot);
  t.c += tx;
  t.f += ty;
  return t;
}

inline AffineTransform sample_weak(Rng& rng, int grid_width, int grid_height) {
  return sample_transform(AugmentPolicy::weak(), rng, grid_width, grid_height);
}

inline AffineTransform sample_strong(Rng& rng, int grid_width, int grid_height) {
  return sample_transform(AugmentPolicy::strong(), rng, grid_width, grid_height);
}

// Simplified joint cutout: zeroes square patches of side 2*radius centered
// on `count` randomly chosen valid joints, across all feature channels.
// Patches are clipped at the grid border. Joints are picked without
// replacement.
inline std::vector<Grid> joint_cutout(std::vector<Grid> features,
                                      const KeypointSet& keypoints,
                                      double radius, int count, Rng& rng) {
  if (radius <= 0.0)
    throw Error(ErrorKind::invalid_argument, "cutout radius must be > 0");
  std::vector<int> valid_idx;
  for (int j = 0; j < static_cast<int>(keypoints.size()); ++j)
    if (keypoints[j].valid) valid_idx.push_back(j);
  if (count > static_cast<int>(valid_idx.size()))
    throw Error(ErrorKind::invalid_argument, "cutout count exceeds valid joints");
  // Partial Fisher-Yates for the first `count` picks.
  for (int i = 0; i < count; ++i) {
    const int k = rng.uniform_int(i, static_cast<int>(valid_idx.size()) - 1);
    std::swap(valid_idx[i], valid_idx[k]);
  }
  for (int i = 0; i < count; ++i) {
    const Keypoint& kp = keypoints[valid_idx[i]];
    // Square of side floor(2r) inside [c - r, c + r], clipped at the border.
    const int side = static_cast<int>(std::floor(2.0 * radius));
    const int px0 = static_cast<int>(std::ceil(kp.x - radius));
    const int py0 = static_cast<int>(std::ceil(kp.y - radius));
    for (Grid& ch : features) {
      const int x0 = std::max(0, px0);
      const int x1 = std::min(ch.width() - 1, px0 + side - 1);
      const int y0 = std::max(0, py0);
      const int y1 = std::min(ch.height() - 1, py0 + side - 1);
      for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) ch.at(x, y) = 0.0;
    }
  }
  return features;
}

}  // namespace phm
