#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "phm/error.hpp"
#include "phm/heatmap.hpp"

namespace phm {

// Per-joint falloff constants for OKS. Defaults are the standard COCO
// keypoint sigmas for the 7-joint skeleton used here:
// head(nose), shoulders, elbows, wrists.
struct OksConfig {
  std::vector<double> k;

  static OksConfig defaults(int joints = 7) {
    static const double coco7[7] = {0.026, 0.079, 0.079, 0.072,
                                    0.072, 0.062, 0.062};
    OksConfig cfg;
    cfg.k.reserve(joints);
    for (int j = 0; j < joints; ++j) cfg.k.push_back(coco7[j % 7]);
    return cfg;
  }

  void validate(int joints) const {
    if (static_cast<int>(k.size()) != joints)
      throw Error(ErrorKind::dim_mismatch, "oks k count != joint count");
    for (double v : k)
      if (!(v > 0.0))
        throw Error(ErrorKind::invalid_argument, "oks k must be > 0");
  }
};

// Object keypoint similarity. `scale` is the person scale in px^2
// (bounding-box area by convention). Invalid predictions at valid ground
// truth joints contribute 0. Joints with invalid ground truth are skipped.
inline double oks(const KeypointSet& pred, const KeypointSet& gt, double scale,
                  const OksConfig& cfg) {
  if (pred.size() != gt.size())
    throw Error(ErrorKind::dim_mismatch, "keypoint sets differ in joint count");
  if (!(scale > 0.0))
    throw Error(ErrorKind::invalid_argument, "scale must be > 0");
  cfg.validate(static_cast<int>(gt.size()));

  double sum = 0.0;
  int valid_gt = 0;
  for (std::size_t j = 0; j < gt.size(); ++j) {
    if (!gt[j].valid) continue;
    ++valid_gt;
    if (!pred[j].valid) continue;
    const double dx = pred[j].x - gt[j].x;
    const double dy = pred[j].y - gt[j].y;
    const double d2 = dx * dx + dy * dy;
    sum += std::exp(-d2 / (2.0 * scale * cfg.k[j] * cfg.k[j]));
  }
  if (valid_gt == 0)
    throw Error(ErrorKind::undefined_metric, "no valid ground-truth joints");
  return sum / valid_gt;
}

// Single-person AP over the 10 OKS thresholds 0.50, 0.55, ..., 0.95:
// the mean across thresholds of the fraction of instances at or above the
// threshold. There is no detection matching; one instance per scene.
inline double average_precision(const std::vector<double>& oks_values) {
  if (oks_values.empty())
    throw Error(ErrorKind::invalid_argument, "no oks values");
  double acc = 0.0;
  for (int i = 0; i < 10; ++i) {
    const double thr = 0.5 + 0.05 * i;
    int hits = 0;
    for (double v : oks_values)
      if (v >= thr) ++hits;
    acc += static_cast<double>(hits) / oks_values.size();
  }
  return acc / 10.0;
}

struct PckResult {
  std::vector<bool> correct;  // per joint; false where gt is invalid
  double fraction = 0.0;      // correct / valid-gt count
};

// PCK@alpha: a joint is correct iff its error is within alpha * l of the
// ground truth, l being the longest bounding-box side. Boundary inclusive.
inline PckResult pck(const KeypointSet& pred, const KeypointSet& gt,
                     double alpha, double bbox_w, double bbox_h) {
  if (pred.size() != gt.size())
    throw Error(ErrorKind::dim_mismatch, "keypoint sets differ in joint count");
  if (!(alpha > 0.0))
    throw Error(ErrorKind::invalid_argument, "alpha must be > 0");
  if (!(bbox_w > 0.0) || !(bbox_h > 0.0))
    throw Error(ErrorKind::invalid_argument, "degenerate bounding box");

  const double limit = alpha * std::max(bbox_w, bbox_h);
  PckResult res;
  res.correct.assign(gt.size(), false);
  int valid_gt = 0, hits = 0;
  for (std::size_t j = 0; j < gt.size(); ++j) {
    if (!gt[j].valid) continue;
    ++valid_gt;
    if (!pred[j].valid) continue;
    const double dx = pred[j].x - gt[j].x;
    const double dy = pred[j].y - gt[j].y;
    if (std::sqrt(dx * dx + dy * dy) <= limit) {
      res.correct[j] = true;
      ++hits;
    }
  }
  res.fraction = valid_gt > 0 ? static_cast<double>(hits) / valid_gt : 0.0;
  return res;
}

}  // namespace phm
