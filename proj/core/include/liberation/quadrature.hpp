#pragma once

#include <cstddef>
#include <vector>

namespace liberation {

/// Nodes and weights of a quadrature rule on a bounded interval.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// Composite midpoint rule with n cells on [lo, hi]. Nodes are interior.
/// For smooth even 2pi-periodic integrands on [0, pi] it converges
/// exponentially.
QuadratureRule midpoint_rule(double lo, double hi, std::size_t n);

/// n-point Gauss-Legendre rule on [lo, hi].
QuadratureRule gauss_legendre(double lo, double hi, std::size_t n);

/// Weights for an arbitrary strictly increasing set of interior nodes:
/// each node owns the cell between the midpoints to its neighbours, the
/// outermost cells extend to lo and hi. Reproduces midpoint_rule weights
/// on a midpoint grid.
std::vector<double> cell_weights(const std::vector<double>& nodes, double lo, double hi);

}  // namespace liberation
