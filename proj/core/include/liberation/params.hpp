#pragma once

namespace liberation {

/// Traces of the two symmetries and the constants derived from them.
///
/// alpha = tau(R), beta = tau(S). The atoms of the stationary law sit at
/// angle pi (mass a) and angle 0 (mass b); r_plus/r_minus are the roots of
/// the quadratic that bounds its absolutely continuous part.
struct TraceParams {
  double alpha = 0.0;
  double beta = 0.0;
  double a = 0.0;  // |alpha - beta| / 2
  double b = 0.0;  // |alpha + beta| / 2
  double r_plus = 1.0;
  double r_minus = -1.0;
  double theta_plus = 0.0;
  double theta_minus = 0.0;

  /// Throws ValidationError unless both traces lie in [-1, 1].
  static TraceParams from_traces(double alpha, double beta);

  /// tau(P), tau(Q) in [0, 1]; alpha = 2 tau(P) - 1.
  static TraceParams from_projection_traces(double tau_p, double tau_q);

  double product() const noexcept { return alpha * beta; }
  double max_square() const noexcept;
  double tau_p() const noexcept { return (1.0 + alpha) / 2.0; }
  double tau_q() const noexcept { return (1.0 + beta) / 2.0; }
};

}  // namespace liberation
