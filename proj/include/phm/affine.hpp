#pragma once

#include <cmath>
#include <utility>

#include "phm/error.hpp"
#include "phm/grid.hpp"
#include "phm/heatmap.hpp"

namespace phm {

// 2x3 affine map from canonical coordinates to view coordinates:
//   [x']   [a  b] [x]   [c]
//   [y'] = [d  e] [y] + [f]
// The linear part must stay invertible (|det| > 1e-9).
struct AffineTransform {
  double a = 1.0, b = 0.0, c = 0.0;
  double d = 0.0, e = 1.0, f = 0.0;

  std::pair<double, double> apply(double x, double y) const {
    return {a * x + b * y + c, d * x + e * y + f};
  }

  double det() const { return a * e - b * d; }

  static AffineTransform identity() { return {}; }

  static AffineTransform translation(double tx, double ty) {
    return {1.0, 0.0, tx, 0.0, 1.0, ty};
  }

  // Rotation by `radians` about (cx, cy), counter-clockwise in pixel coords.
  static AffineTransform rotation_about(double radians, double cx, double cy) {
    const double co = std::cos(radians), si = std::sin(radians);
    return {co, -si, cx - co * cx + si * cy,
            si,  co, cy - si * cx - co * cy};
  }

  static AffineTransform scale_about(double s, double cx, double cy) {
    return {s, 0.0, cx * (1.0 - s), 0.0, s, cy * (1.0 - s)};
  }
};

// compose(t2, t1): apply t1 first, then t2.
inline AffineTransform compose(const AffineTransform& t2, const AffineTransform& t1) {
  return {t2.a * t1.a + t2.b * t1.d,
          t2.a * t1.b + t2.b * t1.e,
          t2.a * t1.c + t2.b * t1.f + t2.c,
          t2.d * t1.a + t2.e * t1.d,
          t2.d * t1.b + t2.e * t1.e,
          t2.d * t1.c + t2.e * t1.f + t2.f};
}

inline AffineTransform invert(const AffineTransform& t) {
  const double det = t.det();
  if (std::abs(det) <= 1e-9)
    throw Error(ErrorKind::singular_transform, "affine transform is singular");
  const double ia = t.e / det, ib = -t.b / det;
  const double id = -t.d / det, ie = t.a / det;
  return {ia, ib, -(ia * t.c + ib * t.f),
          id, ie, -(id * t.c + ie * t.f)};
}

struct WarpResult {
  Heatmap map;
  ValidityMask valid;
};

namespace detail {

// Bilinear read at continuous (x, y); caller guarantees the point is inside
// [0, w-1] x [0, h-1].
template <typename GridLike>
inline double bilinear(const GridLike& g, double x, double y) {
  int x0 = static_cast<int>(std::floor(x));
  int y0 = static_cast<int>(std::floor(y));
  if (x0 >= g.width() - 1) x0 = g.width() - 2;
  if (y0 >= g.height() - 1) y0 = g.height() - 2;
  if (x0 < 0) x0 = 0;
  if (y0 < 0) y0 = 0;
  const double fx = x - x0, fy = y - y0;
  const double v00 = g.at(x0, y0), v10 = g.at(x0 + 1, y0);
  const double v01 = g.at(x0, y0 + 1), v11 = g.at(x0 + 1, y0 + 1);
  return v00 * (1 - fx) * (1 - fy) + v10 * fx * (1 - fy) +
         v01 * (1 - fx) * fy + v11 * fx * fy;
}

}  // namespace detail

// Resamples `hm` so that out(p) = hm(invert(t)(p)). Output pixels whose
// source point falls outside the input grid are zero and marked invalid.
// Degenerate 1-wide/1-tall inputs are not supported by the bilinear stencil.
inline WarpResult warp_heatmap(const Heatmap& hm, const AffineTransform& t,
                               int out_width, int out_height) {
  if (hm.width() < 2 || hm.height() < 2)
    throw Error(ErrorKind::invalid_argument, "warp needs a >= 2x2 heatmap");
  const AffineTransform inv = invert(t);
  Heatmap out(out_width, out_height);
  ValidityMask mask(out_width, out_height, false);
  const double xmax = hm.width() - 1.0, ymax = hm.height() - 1.0;
  for (int y = 0; y < out_height; ++y) {
    for (int x = 0; x < out_width; ++x) {
      const auto [sx, sy] = inv.apply(x, y);
      if (sx < 0.0 || sy < 0.0 || sx > xmax || sy > ymax) continue;
      out.set(x, y, detail::bilinear(hm, sx, sy));
      mask.set(x, y, true);
    }
  }
  return {std::move(out), std::move(mask)};
}

inline WarpResult warp_heatmap(const Heatmap& hm, const AffineTransform& t) {
  return warp_heatmap(hm, t, hm.width(), hm.height());
}

// Adjoint of the sampling above: scatters an output-side gradient back onto
// the input grid with the same bilinear weights. Needed when a loss is
// evaluated on a warped prediction and the gradient has to reach the
// pre-warp responses.
inline Grid warp_adjoint(const Grid& grad_out, const AffineTransform& t,
                         int in_width, int in_height) {
  const AffineTransform inv = invert(t);
  Grid grad_in(in_width, in_height, 0.0);
  const double xmax = in_width - 1.0, ymax = in_height - 1.0;
  for (int y = 0; y < grad_out.height(); ++y) {
    for (int x = 0; x < grad_out.width(); ++x) {
      const double g = grad_out.at(x, y);
      if (g == 0.0) continue;
      const auto [sx, sy] = inv.apply(x, y);
      if (sx < 0.0 || sy < 0.0 || sx > xmax || sy > ymax) continue;
      int x0 = static_cast<int>(std::floor(sx));
      int y0 = static_cast<int>(std::floor(sy));
      if (x0 >= in_width - 1) x0 = in_width - 2;
      if (y0 >= in_height - 1) y0 = in_height - 2;
      if (x0 < 0) x0 = 0;
      if (y0 < 0) y0 = 0;
      const double fx = sx - x0, fy = sy - y0;
      grad_in.at(x0, y0) += g * (1 - fx) * (1 - fy);
      grad_in.at(x0 + 1, y0) += g * fx * (1 - fy);
      grad_in.at(x0, y0 + 1) += g * (1 - fx) * fy;
      grad_in.at(x0 + 1, y0 + 1) += g * fx * fy;
    }
  }
  return grad_in;
}

// Aligns a prediction made in a view frame back to the canonical frame,
// where view = t(canonical): out(p) = pred(t(p)).
inline WarpResult align_to_canonical(const Heatmap& view_pred,
                                     const AffineTransform& t,
                                     int out_width, int out_height) {
  return warp_heatmap(view_pred, invert(t), out_width, out_height);
}

}  // namespace phm
