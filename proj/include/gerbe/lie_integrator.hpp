#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "gerbe/crossed_module.hpp"
#include "gerbe/types.hpp"

namespace gerbe {

// Gauss-Legendre rule on [0, 1].
struct QuadratureRule {
  std::vector<double> nodes, weights;
};

inline QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw ConfigError("gauss_legendre: need at least one point");
  QuadratureRule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  const double pi = std::acos(-1.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = 0.5 * (1.0 - x);
    r.nodes[n - 1 - i] = 0.5 * (1.0 + x);
    r.weights[i] = r.weights[n - 1 - i] = 0.5 * w;
  }
  return r;
}

// Fourth-order commutator-free exponential stepper (two exponentials per step,
// two Gauss nodes).  For Y' = F(t) Y:
//   Y1 = exp(h (a F1 + b F2)) exp(h (b F1 + a F2)) Y0
// and for Y' = Y X(t):
//   Y1 = Y0 exp(h (b X1 + a X2)) exp(h (a X1 + b X2)).
struct CF4 {
  static constexpr double c1 = 0.5 - 0.28867513459481288225;  // 1/2 - sqrt(3)/6
  static constexpr double c2 = 0.5 + 0.28867513459481288225;
  static constexpr double a = 0.25 - 0.28867513459481288225;
  static constexpr double b = 0.25 + 0.28867513459481288225;

  template <class Gen>
  static Mat left_step(const CrossedModule& cm, Side s, const Mat& Y, double t0, double h, Gen&& F) {
    Mat F1 = F(t0 + c1 * h), F2 = F(t0 + c2 * h);
    return cm.exp(s, h * (a * F1 + b * F2)) * cm.exp(s, h * (b * F1 + a * F2)) * Y;
  }

  template <class Gen>
  static Mat right_step(const CrossedModule& cm, Side s, const Mat& Y, double t0, double h, Gen&& X) {
    Mat X1 = X(t0 + c1 * h), X2 = X(t0 + c2 * h);
    return Y * cm.exp(s, h * (b * X1 + a * X2)) * cm.exp(s, h * (a * X1 + b * X2));
  }
};

}  // namespace gerbe
