#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "phm/error.hpp"

namespace phm {

// Plain row-major real grid. Unbounded values; used for feature channels
// and raw model responses. Heatmap (heatmap.hpp) adds the [0,1] clamp.
class Grid {
 public:
  Grid() = default;
  Grid(int width, int height, double fill = 0.0)
      : width_(width), height_(height),
        values_(check_dims(width, height), fill) {}

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return values_.size(); }

  double& at(int x, int y) { return values_[idx(x, y)]; }
  double at(int x, int y) const { return values_[idx(x, y)]; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  bool contains(int x, int y) const {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

 private:
  static std::size_t check_dims(int w, int h) {
    if (w < 1 || h < 1)
      throw Error(ErrorKind::invalid_argument, "grid dims must be >= 1");
    return static_cast<std::size_t>(w) * static_cast<std::size_t>(h);
  }
  std::size_t idx(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> values_;
};

// Per-pixel boolean mask paired with a grid of the same dimensions.
// Tracks which pixels carry real data after a warp (false = mapped from
// outside the source view).
class ValidityMask {
 public:
  ValidityMask() = default;
  ValidityMask(int width, int height, bool fill = true)
      : width_(width), height_(height),
        bits_(static_cast<std::size_t>(width) * height, fill ? 1 : 0) {
    if (width < 1 || height < 1)
      throw Error(ErrorKind::invalid_argument, "mask dims must be >= 1");
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return bits_.size(); }

  bool at(int x, int y) const { return bits_[idx(x, y)] != 0; }
  void set(int x, int y, bool v) { bits_[idx(x, y)] = v ? 1 : 0; }
  bool operator[](std::size_t i) const { return bits_[i] != 0; }
  void set(std::size_t i, bool v) { bits_[i] = v ? 1 : 0; }

  bool all() const {
    for (auto b : bits_)
      if (!b) return false;
    return true;
  }
  std::size_t count() const {
    std::size_t n = 0;
    for (auto b : bits_) n += b;
    return n;
  }

 private:
  std::size_t idx(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<unsigned char> bits_;
};

}  // namespace phm
