#pragma once

#include <cmath>
#include <cstdint>

namespace phm {

// splitmix64 state mixer. Small, fast, and bit-stable across platforms,
// which is what the reproducibility contract needs (std:: distributions
// are not guaranteed to produce identical sequences everywhere).
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Deterministic seeded generator. Workers never share one: derive an
// independent stream per trial/scene with Rng::stream(master, id) so that
// adding trials never perturbs earlier ones.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(mix64(seed ^ 0xA02B1C5D72E4F6A8ULL)) {}

  static Rng stream(std::uint64_t master_seed, std::uint64_t stream_id) {
    return Rng(mix64(master_seed) ^ mix64(stream_id * 0xD6E8FEB86659FD93ULL + 1));
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  // Inclusive integer range.
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  bool bernoulli(double p) { return unit() < p; }

  // Box-Muller; draws two uniforms per call and keeps no spare, so the
  // draw count per sample is fixed.
  double normal(double mean, double sigma) {
    double u1 = unit();
    double u2 = unit();
    if (u1 < 1e-300) u1 = 1e-300;
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sigma * r * std::cos(6.283185307179586476925286766559 * u2);
  }

 private:
  std::uint64_t state_;
};

}  // namespace phm
