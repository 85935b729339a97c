#pragma once

#include <cstdint>
#include <random>

#include "gerbe/crossed_module.hpp"

namespace gerbe {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  int index(int n) { return std::uniform_int_distribution<int>(0, n - 1)(engine_); }
  std::uint64_t next() { return engine_(); }

  // Random algebra element with coordinates uniform in [-scale, scale].
  Mat algebra(const CrossedModule& cm, Side s, double scale = 0.5) {
    Mat X = cm.zero(s);
    for (const Mat& b : cm.basis(s)) X += uniform(-scale, scale) * b;
    return X;
  }
  Mat group(const CrossedModule& cm, Side s, double scale = 0.5) { return cm.exp(s, algebra(cm, s, scale)); }
  Vec3 vec(double scale = 1.0) { return Vec3(uniform(-scale, scale), uniform(-scale, scale), uniform(-scale, scale)); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gerbe
