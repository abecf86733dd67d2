#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "phm/error.hpp"
#include "phm/grid.hpp"
#include "phm/heatmap.hpp"

namespace phm {

// One augmented view's prediction after alignment back to the canonical
// frame. The validity mask is shared by all joints of the view (they went
// through the same warp).
struct AlignedView {
  HeatmapSet maps;
  ValidityMask valid;
};

// The pool a pseudo-label is distilled from: 1 weak + K strong views.
struct AlignedViews {
  std::vector<AlignedView> views;

  int view_count() const { return static_cast<int>(views.size()); }
  int joint_count() const { return views.front().maps.joint_count(); }
  int width() const { return views.front().maps.width(); }
  int height() const { return views.front().maps.height(); }

  void check() const {
    if (views.empty())
      throw Error(ErrorKind::invalid_argument, "no views to ensemble");
    for (const AlignedView& v : views) {
      if (v.maps.joint_count() != joint_count() || v.maps.width() != width() ||
          v.maps.height() != height() || v.valid.width() != width() ||
          v.valid.height() != height())
        throw Error(ErrorKind::dim_mismatch, "aligned views differ in dims");
    }
  }
};

struct EnsembleResult {
  HeatmapSet maps;
  ValidityMask valid;  // pixel valid in >= 1 view
};

// Winner-take-all ensembling: per-pixel maximum over the views where the
// pixel is valid. Pixels covered by no view come out zero and invalid.
inline EnsembleResult ensemble_max(const AlignedViews& av) {
  av.check();
  const int J = av.joint_count(), W = av.width(), H = av.height();
  EnsembleResult out{HeatmapSet(J, W, H), ValidityMask(W, H, false)};
  const std::size_t n = static_cast<std::size_t>(W) * H;
  for (std::size_t i = 0; i < n; ++i) {
    bool any = false;
    for (const AlignedView& v : av.views) any = any || v.valid[i];
    out.valid.set(i, any);
  }
  for (int j = 0; j < J; ++j) {
    Heatmap& dst = out.maps[j];
    for (std::size_t i = 0; i < n; ++i) {
      double m = 0.0;
      bool any = false;
      for (const AlignedView& v : av.views) {
        if (!v.valid[i]) continue;
        const double x = v.maps[j][i];
        m = any ? std::max(m, x) : x;
        any = true;
      }
      dst.set(i, any ? m : 0.0);
    }
  }
  return out;
}

// Mean over valid views per pixel; ablation baseline for the max rule.
// Pixels valid in no view come out zero.
inline HeatmapSet ensemble_avg(const AlignedViews& av) {
  av.check();
  const int J = av.joint_count(), W = av.width(), H = av.height();
  HeatmapSet out(J, W, H);
  const std::size_t n = static_cast<std::size_t>(W) * H;
  for (int j = 0; j < J; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0;
      int cnt = 0;
      for (const AlignedView& v : av.views) {
        if (!v.valid[i]) continue;
        sum += v.maps[j][i];
        ++cnt;
      }
      out[j].set(i, cnt > 0 ? sum / cnt : 0.0);
    }
  }
  return out;
}

// Per-joint grids of cross-view dispersion.
struct UncertaintyMap {
  std::vector<Grid> joints;

  int joint_count() const { return static_cast<int>(joints.size()); }
};

// Pixels covered by fewer than two views cannot give a dispersion estimate;
// they get a sentinel strictly above any reachable stdev of [0,1] values
// (which caps at 0.5), so such regions never win a selection.
inline constexpr double kMaxUncertainty = 1.0;

// Per-pixel population standard deviation (divide by n) across the views
// valid at that pixel.
inline UncertaintyMap uncertainty_map(const AlignedViews& av) {
  av.check();
  const int J = av.joint_count(), W = av.width(), H = av.height();
  UncertaintyMap out;
  out.joints.reserve(J);
  const std::size_t n = static_cast<std::size_t>(W) * H;
  for (int j = 0; j < J; ++j) {
    Grid g(W, H);
    for (std::size_t i = 0; i < n; ++i) {
      double sum = 0.0, sum2 = 0.0;
      int cnt = 0;
      for (const AlignedView& v : av.views) {
        if (!v.valid[i]) continue;
        const double x = v.maps[j][i];
        sum += x;
        sum2 += x * x;
        ++cnt;
      }
      if (cnt < 2) {
        g[i] = kMaxUncertainty;
      } else {
        const double mean = sum / cnt;
        const double var = std::max(0.0, sum2 / cnt - mean * mean);
        g[i] = std::sqrt(var);
      }
    }
    out.joints.push_back(std::move(g));
  }
  return out;
}

// Scalar joint uncertainty: the maximum of the joint's uncertainty map.
inline std::vector<double> joint_uncertainty(const UncertaintyMap& um) {
  std::vector<double> out;
  out.reserve(um.joints.size());
  for (const Grid& g : um.joints) {
    double m = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) m = std::max(m, g[i]);
    out.push_back(m);
  }
  return out;
}

struct RefineResult {
  Heatmap map;
  bool accepted = false;
};

// Threshold-and-refine: joints whose peak response clears tau are replaced
// by a clean unit Gaussian at the peak; the rest are rejected outright
// (zero map). The comparison is strict, so tau = 0 accepts any nonzero map.
inline RefineResult threshold_and_refine(const Heatmap& hm, double tau,
                                         double sigma) {
  if (!(tau >= 0.0) || tau >= 1.0)
    throw Error(ErrorKind::invalid_argument, "tau must be in [0, 1)");
  if (!(sigma > 0.0))
    throw Error(ErrorKind::invalid_argument, "sigma must be > 0");
  const Keypoint peak = argmax_decode(hm);
  if (!peak.valid || peak.confidence <= tau)
    return {Heatmap(hm.width(), hm.height()), false};
  return {render_gaussian(peak.x, peak.y, sigma, hm.width(), hm.height(), 1.0),
          true};
}

// Threshold without the refinement step (ablation variant): the raw map is
// kept when it clears tau.
inline RefineResult threshold_only(const Heatmap& hm, double tau) {
  if (!(tau >= 0.0) || tau >= 1.0)
    throw Error(ErrorKind::invalid_argument, "tau must be in [0, 1)");
  const Keypoint peak = argmax_decode(hm);
  if (!peak.valid || peak.confidence <= tau)
    return {Heatmap(hm.width(), hm.height()), false};
  return {hm, true};
}

enum class LabelSource { self, other };

inline const char* to_string(LabelSource s) {
  return s == LabelSource::self ? "self" : "other";
}

// One joint's denoised training target.
struct PseudoLabel {
  Heatmap heatmap;
  bool accepted = false;
  double uncertainty = kMaxUncertainty;
  LabelSource source = LabelSource::self;
};

using PseudoLabelSet = std::vector<PseudoLabel>;

enum class Aggregate { max, avg };

struct PipelineOptions {
  double tau = 0.1;
  double delta = 0.05;
  double sigma_px = 2.0;
  Aggregate aggregate = Aggregate::max;
  bool refine = true;
};

// One student's half of the pipeline: ensemble the aligned views, score
// per-joint uncertainty on the raw pool, then threshold (and optionally
// refine) each joint.
inline PseudoLabelSet make_pseudo_labels(const AlignedViews& av,
                                         const PipelineOptions& opt) {
  HeatmapSet ensembled = opt.aggregate == Aggregate::max
                             ? ensemble_max(av).maps
                             : ensemble_avg(av);
  const std::vector<double> u = joint_uncertainty(uncertainty_map(av));
  PseudoLabelSet out;
  out.reserve(ensembled.joint_count());
  for (int j = 0; j < ensembled.joint_count(); ++j) {
    RefineResult r = opt.refine
                         ? threshold_and_refine(ensembled[j], opt.tau, opt.sigma_px)
                         : threshold_only(ensembled[j], opt.tau);
    out.push_back(PseudoLabel{std::move(r.map), r.accepted, u[j],
                              LabelSource::self});
  }
  return out;
}

// Uncertainty-guided cross-student selection. For each joint the student
// keeps its own label only when its uncertainty undercuts the other
// student's by more than delta; ties and everything else fall to the other
// student. A rejected winner falls back to the loser; two rejections leave
// the joint excluded.
inline PseudoLabelSet select_pseudo(const PseudoLabelSet& p_self,
                                    const PseudoLabelSet& p_other,
                                    double delta) {
  if (p_self.size() != p_other.size())
    throw Error(ErrorKind::dim_mismatch, "pseudo label sets differ in joints");
  if (!(delta >= 0.0))
    throw Error(ErrorKind::invalid_argument, "delta must be >= 0");
  PseudoLabelSet out;
  out.reserve(p_self.size());
  for (std::size_t j = 0; j < p_self.size(); ++j) {
    const bool prefer_self =
        p_self[j].uncertainty + delta < p_other[j].uncertainty;
    const PseudoLabel* chosen = prefer_self ? &p_self[j] : &p_other[j];
    const PseudoLabel* fallback = prefer_self ? &p_other[j] : &p_self[j];
    if (!chosen->accepted && fallback->accepted) chosen = fallback;
    PseudoLabel lab = *chosen;
    lab.source = (chosen == &p_self[j]) ? LabelSource::self : LabelSource::other;
    if (!chosen->accepted) lab.accepted = false;
    out.push_back(std::move(lab));
  }
  return out;
}

}  // namespace phm
