#include "liberation/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "liberation/errors.hpp"

namespace liberation {

QuadratureRule midpoint_rule(double lo, double hi, std::size_t n) {
  if (n == 0 || !(hi > lo)) throw ValidationError("midpoint_rule: need n >= 1 and hi > lo");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.assign(n, (hi - lo) / static_cast<double>(n));
  for (std::size_t j = 0; j < n; ++j) {
    rule.nodes[j] = lo + (static_cast<double>(j) + 0.5) * (hi - lo) / static_cast<double>(n);
  }
  return rule;
}

QuadratureRule gauss_legendre(double lo, double hi, std::size_t n) {
  if (n == 0 || !(hi > lo)) throw ValidationError("gauss_legendre: need n >= 1 and hi > lo");
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double mid = 0.5 * (hi + lo);
  const double half = 0.5 * (hi - lo);
  const auto m = (n + 1) / 2;
  for (std::size_t i = 0; i < m; ++i) {
    // Tricomi initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * x * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // x runs from near +1 downwards; store ascending.
    rule.nodes[i] = mid - half * x;
    rule.nodes[n - 1 - i] = mid + half * x;
    rule.weights[i] = half * w;
    rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

std::vector<double> cell_weights(const std::vector<double>& nodes, double lo, double hi) {
  std::vector<double> w(nodes.size());
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    const double left = j == 0 ? lo : 0.5 * (nodes[j - 1] + nodes[j]);
    const double right = j + 1 == nodes.size() ? hi : 0.5 * (nodes[j] + nodes[j + 1]);
    w[j] = right - left;
  }
  return w;
}

}  // namespace liberation
