#include "phm/heatmap.hpp"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "phm/rng.hpp"

namespace {

using phm::Error;
using phm::ErrorKind;
using phm::Heatmap;
using phm::HeatmapSet;
using phm::Keypoint;
using phm::render_gaussian;
using phm::argmax_decode;

TEST(RenderGaussian, PeakAtCenterEqualsAmplitude) {
  Heatmap hm = render_gaussian(8.0, 8.0, 2.0, 16, 16, 1.0);
  EXPECT_DOUBLE_EQ(hm.at(8, 8), 1.0);
}

TEST(RenderGaussian, ClosedFormValueOffCenter) {
  Heatmap hm = render_gaussian(8.0, 8.0, 2.0, 16, 16, 1.0);
  // distance 2 px, sigma 2: exp(-4/8)
  EXPECT_NEAR(hm.at(10, 8), 0.6065306597126334, 1e-12);
}

TEST(RenderGaussian, FarCenterLeavesOnlyTail) {
  Heatmap hm = render_gaussian(-100.0, -100.0, 2.0, 16, 16, 1.0);
  for (std::size_t i = 0; i < hm.size(); ++i) EXPECT_LT(hm[i], 1e-6);
}

TEST(RenderGaussian, MonotoneAlongRaysFromCenter) {
  Heatmap hm = render_gaussian(8.0, 8.0, 2.5, 17, 17, 0.9);
  const int dirs[4][2] = {{1, 0}, {0, 1}, {1, 1}, {-1, 1}};
  for (const auto& d : dirs) {
    double prev = hm.at(8, 8);
    for (int s = 1; s <= 7; ++s) {
      const int x = 8 + d[0] * s, y = 8 + d[1] * s;
      if (x < 0 || y < 0 || x >= 17 || y >= 17) break;
      EXPECT_LT(hm.at(x, y), prev);
      prev = hm.at(x, y);
    }
  }
}

TEST(RenderGaussian, RejectsBadArguments) {
  EXPECT_THROW(render_gaussian(0, 0, 0.0, 8, 8, 1.0), Error);
  EXPECT_THROW(render_gaussian(0, 0, -1.0, 8, 8, 1.0), Error);
  EXPECT_THROW(render_gaussian(0, 0, 1.0, 0, 8, 1.0), Error);
  EXPECT_THROW(render_gaussian(0, 0, 1.0, 8, 8, 0.0), Error);
  EXPECT_THROW(render_gaussian(0, 0, 1.0, 8, 8, 1.5), Error);
  try {
    render_gaussian(0, 0, -1.0, 8, 8, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_argument);
  }
}

TEST(Heatmap, ClampsOnConstruction) {
  Heatmap hm(2, 2, std::vector<double>{-0.5, 0.25, 1.5, 1.0});
  EXPECT_DOUBLE_EQ(hm[0], 0.0);
  EXPECT_DOUBLE_EQ(hm[1], 0.25);
  EXPECT_DOUBLE_EQ(hm[2], 1.0);
  EXPECT_DOUBLE_EQ(hm[3], 1.0);
}

TEST(Heatmap, RejectsNonFiniteAndBadDims) {
  EXPECT_THROW(Heatmap(2, 2, {0.0, 0.1, std::nan(""), 0.3}), Error);
  EXPECT_THROW(Heatmap(0, 4), Error);
  EXPECT_THROW(Heatmap(2, 2, std::vector<double>(3, 0.0)), Error);
}

TEST(HeatmapSet, EnforcesUniformDims) {
  std::vector<Heatmap> maps;
  maps.emplace_back(4, 4);
  maps.emplace_back(4, 5);
  EXPECT_THROW(HeatmapSet(std::move(maps)), Error);
  EXPECT_THROW(HeatmapSet(std::vector<Heatmap>{}), Error);
}

TEST(ArgmaxDecode, DecodesRenderedPeak) {
  Keypoint kp = argmax_decode(render_gaussian(8.0, 8.0, 2.0, 16, 16, 1.0));
  EXPECT_TRUE(kp.valid);
  EXPECT_DOUBLE_EQ(kp.x, 8.0);
  EXPECT_DOUBLE_EQ(kp.y, 8.0);
  EXPECT_DOUBLE_EQ(kp.confidence, 1.0);
}

TEST(ArgmaxDecode, AllZeroMapIsInvalid) {
  Keypoint kp = argmax_decode(Heatmap(8, 8));
  EXPECT_FALSE(kp.valid);
  EXPECT_DOUBLE_EQ(kp.confidence, 0.0);
}

TEST(ArgmaxDecode, TieBreaksToLowestRowMajorIndex) {
  Heatmap hm(8, 8);
  hm.set(std::size_t{5}, 0.9);
  hm.set(std::size_t{40}, 0.9);
  Keypoint kp = argmax_decode(hm);
  EXPECT_DOUBLE_EQ(kp.x, 5.0);
  EXPECT_DOUBLE_EQ(kp.y, 0.0);
}

TEST(ArgmaxDecode, NearestPixelForCentersAtPixelCenters) {
  phm::Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int cx = rng.uniform_int(2, 13), cy = rng.uniform_int(2, 13);
    Keypoint kp = argmax_decode(
        render_gaussian(cx, cy, rng.uniform(1.0, 3.0), 16, 16, 0.8));
    EXPECT_DOUBLE_EQ(kp.x, cx);
    EXPECT_DOUBLE_EQ(kp.y, cy);
  }
}

TEST(ArgmaxDecode, SubpixelRefineShiftsTowardLargerNeighbour) {
  // Peak rendered at x = 8.4: integer decode says 8, refinement nudges +0.25.
  Heatmap hm = render_gaussian(8.4, 8.0, 2.0, 16, 16, 1.0);
  Keypoint plain = argmax_decode(hm, false);
  Keypoint fine = argmax_decode(hm, true);
  EXPECT_DOUBLE_EQ(plain.x, 8.0);
  EXPECT_DOUBLE_EQ(fine.x, 8.25);
  EXPECT_DOUBLE_EQ(fine.y, 8.0);
}

}  // namespace
