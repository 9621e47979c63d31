#include "liberation/params.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "liberation/errors.hpp"

namespace liberation {

TraceParams TraceParams::from_traces(double alpha, double beta) {
  auto check = [](const char* name, double v) {
    if (!std::isfinite(v) || v < -1.0 || v > 1.0) {
      std::ostringstream msg;
      msg << name << " must lie in [-1, 1], got " << v;
      throw ValidationError(msg.str());
    }
  };
  check("alpha", alpha);
  check("beta", beta);

  TraceParams p;
  p.alpha = alpha;
  p.beta = beta;
  p.a = std::abs(alpha - beta) / 2.0;
  p.b = std::abs(alpha + beta) / 2.0;
  const double spread = std::sqrt(std::max(0.0, (1.0 - alpha * alpha) * (1.0 - beta * beta)));
  p.r_plus = std::clamp(alpha * beta + spread, -1.0, 1.0);
  p.r_minus = std::clamp(alpha * beta - spread, -1.0, 1.0);
  p.theta_plus = std::acos(p.r_plus);
  p.theta_minus = std::acos(p.r_minus);
  return p;
}

TraceParams TraceParams::from_projection_traces(double tau_p, double tau_q) {
  if (!(tau_p >= 0.0 && tau_p <= 1.0) || !(tau_q >= 0.0 && tau_q <= 1.0)) {
    throw ValidationError("projection traces must lie in [0, 1]");
  }
  return from_traces(2.0 * tau_p - 1.0, 2.0 * tau_q - 1.0);
}

double TraceParams::max_square() const noexcept {
  return std::max(alpha * alpha, beta * beta);
}

}  // namespace liberation
