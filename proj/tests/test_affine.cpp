#include "phm/affine.hpp"

#include <cmath>

#include <gtest/gtest.h>

#include "phm/heatmap.hpp"
#include "phm/rng.hpp"

namespace {

using phm::AffineTransform;
using phm::Error;
using phm::ErrorKind;
using phm::Heatmap;
using phm::Keypoint;
using phm::WarpResult;
using phm::compose;
using phm::invert;
using phm::render_gaussian;
using phm::warp_heatmap;

constexpr double kPi = 3.14159265358979323846;

TEST(Invert, IdentityAndTranslation) {
  const AffineTransform id = invert(AffineTransform::identity());
  EXPECT_DOUBLE_EQ(id.a, 1.0);
  EXPECT_DOUBLE_EQ(id.c, 0.0);
  EXPECT_DOUBLE_EQ(id.f, 0.0);

  const AffineTransform t = invert(AffineTransform::translation(3.0, 5.0));
  EXPECT_DOUBLE_EQ(t.c, -3.0);
  EXPECT_DOUBLE_EQ(t.f, -5.0);
}

TEST(Invert, RotationRoundTripsAPoint) {
  const AffineTransform rot =
      AffineTransform::rotation_about(30.0 * kPi / 180.0, 0.0, 0.0);
  const auto [vx, vy] = rot.apply(10.0, 4.0);
  const auto [bx, by] = invert(rot).apply(vx, vy);
  EXPECT_NEAR(bx, 10.0, 1e-9);
  EXPECT_NEAR(by, 4.0, 1e-9);
}

TEST(Invert, NearSingularThrows) {
  AffineTransform t;
  t.a = 1e-6;
  t.e = 1e-6;  // det = 1e-12
  try {
    invert(t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::singular_transform);
  }
}

TEST(Invert, InvolutionOnRandomTransforms) {
  phm::Rng rng(11);
  for (int i = 0; i < 100; ++i) {
    const double ang = rng.uniform(-kPi, kPi);
    const double s = rng.uniform(0.4, 1.8);
    AffineTransform t = compose(
        AffineTransform::scale_about(s, rng.uniform(0, 32), rng.uniform(0, 32)),
        AffineTransform::rotation_about(ang, rng.uniform(0, 32),
                                        rng.uniform(0, 32)));
    t.c += rng.uniform(-5, 5);
    t.f += rng.uniform(-5, 5);
    const AffineTransform back = invert(invert(t));
    EXPECT_NEAR(back.a, t.a, 1e-9);
    EXPECT_NEAR(back.b, t.b, 1e-9);
    EXPECT_NEAR(back.c, t.c, 1e-9);
    EXPECT_NEAR(back.d, t.d, 1e-9);
    EXPECT_NEAR(back.e, t.e, 1e-9);
    EXPECT_NEAR(back.f, t.f, 1e-9);
  }
}

TEST(ComposeInvert, MapsPointsToThemselves) {
  phm::Rng rng(13);
  for (int i = 0; i < 100; ++i) {
    AffineTransform t = AffineTransform::rotation_about(
        rng.uniform(-kPi, kPi), rng.uniform(0, 64), rng.uniform(0, 64));
    t.c += rng.uniform(-10, 10);
    const AffineTransform round = compose(invert(t), t);
    const double x = rng.uniform(0, 64), y = rng.uniform(0, 64);
    const auto [rx, ry] = round.apply(x, y);
    EXPECT_NEAR(rx, x, 1e-9);
    EXPECT_NEAR(ry, y, 1e-9);
  }
}

TEST(WarpHeatmap, IdentityIsExactAndFullyValid) {
  const Heatmap hm = render_gaussian(7.0, 9.0, 2.0, 20, 18, 0.9);
  const WarpResult out = warp_heatmap(hm, AffineTransform::identity());
  ASSERT_TRUE(out.valid.all());
  for (std::size_t i = 0; i < hm.size(); ++i)
    EXPECT_DOUBLE_EQ(out.map[i], hm[i]);
}

TEST(WarpHeatmap, IntegerTranslationShiftsColumns) {
  const Heatmap hm = render_gaussian(8.0, 8.0, 2.0, 16, 16, 1.0);
  const WarpResult out =
      warp_heatmap(hm, AffineTransform::translation(2.0, 0.0));
  for (int y = 0; y < 16; ++y) {
    // Vacated columns are invalid and zero.
    EXPECT_FALSE(out.valid.at(0, y));
    EXPECT_FALSE(out.valid.at(1, y));
    EXPECT_DOUBLE_EQ(out.map.at(0, y), 0.0);
    for (int x = 2; x < 16; ++x) {
      EXPECT_TRUE(out.valid.at(x, y));
      EXPECT_DOUBLE_EQ(out.map.at(x, y), hm.at(x - 2, y));
    }
  }
}

TEST(WarpHeatmap, RotationRoundTripKeepsPeakAndValues) {
  const AffineTransform rot =
      AffineTransform::rotation_about(45.0 * kPi / 180.0, 7.5, 7.5);
  const Heatmap hm = render_gaussian(10.0, 6.0, 2.5, 16, 16, 1.0);
  const WarpResult fwd = warp_heatmap(hm, rot);
  const WarpResult back = warp_heatmap(fwd.map, invert(rot));
  const Keypoint orig = phm::argmax_decode(hm);
  const Keypoint rt = phm::argmax_decode(back.map);
  EXPECT_LE(std::hypot(rt.x - orig.x, rt.y - orig.y), 0.5);
}

// Round trip through 100 random transforms: decoded peak unchanged, values
// on the doubly-valid region within the bilinear blur tolerance.
TEST(WarpHeatmap, RandomRoundTripWithinTolerance) {
  phm::Rng rng(17);
  for (int i = 0; i < 100; ++i) {
    const int cx = rng.uniform_int(22, 42), cy = rng.uniform_int(22, 42);
    const double sigma = rng.uniform(3.0, 4.5);
    const Heatmap hm = render_gaussian(cx, cy, sigma, 64, 64, 1.0);

    // Scale stays near 1 so the view-frame bump keeps sigma >= ~2.4 px;
    // sharper bumps exceed the bilinear blur budget of the assertion.
    AffineTransform t = compose(
        AffineTransform::scale_about(rng.uniform(0.8, 1.25), 31.5, 31.5),
        AffineTransform::rotation_about(rng.uniform(-kPi / 3, kPi / 3), 31.5,
                                        31.5));
    const WarpResult fwd = warp_heatmap(hm, t);
    const WarpResult back = warp_heatmap(fwd.map, invert(t));

    const Keypoint orig = phm::argmax_decode(hm);
    const Keypoint rt = phm::argmax_decode(back.map);
    ASSERT_TRUE(rt.valid);
    EXPECT_LE(std::hypot(rt.x - orig.x, rt.y - orig.y), 0.5);

    for (int y = 0; y < 64; ++y)
      for (int x = 0; x < 64; ++x)
        if (back.valid.at(x, y))
          EXPECT_NEAR(back.map.at(x, y), hm.at(x, y), 0.05);
  }
}

// The adjoint must agree with the forward map: <W u, v> == <u, W^T v>.
TEST(WarpAdjoint, MatchesForwardInnerProduct) {
  phm::Rng rng(19);
  for (int i = 0; i < 25; ++i) {
    AffineTransform t = compose(
        AffineTransform::scale_about(rng.uniform(0.7, 1.4), 7.5, 7.5),
        AffineTransform::rotation_about(rng.uniform(-1.0, 1.0), 7.5, 7.5));

    std::vector<double> uvals(16 * 16);
    for (double& v : uvals) v = rng.uniform(0.0, 1.0);
    const Heatmap u(16, 16, uvals);

    phm::Grid v(16, 16);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = rng.uniform(-1.0, 1.0);

    const WarpResult wu = warp_heatmap(u, t);
    const phm::Grid wtv = phm::warp_adjoint(v, t, 16, 16);

    double lhs = 0.0, rhs = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) lhs += wu.map[k] * v[k];
    for (std::size_t k = 0; k < v.size(); ++k) rhs += u[k] * wtv[k];
    EXPECT_NEAR(lhs, rhs, 1e-9);
  }
}

}  // namespace
