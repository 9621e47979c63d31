#pragma once

// Scalar helpers shared by the real-axis closed forms, which run in long
// double or, near the edge of the flow domain, in binary128.

#include <cmath>

#include <quadmath.h>

#include "liberation/errors.hpp"
#include "liberation/transforms.hpp"

namespace liberation::detail {

__extension__ typedef __float128 quad;

inline long double real_sqrt(long double x) { return std::sqrt(x); }
inline long double real_exp(long double x) { return std::exp(x); }
inline long double real_log(long double x) { return std::log(x); }
inline long double real_abs(long double x) { return std::fabs(x); }

inline quad real_sqrt(quad x) { return sqrtq(x); }
inline quad real_exp(quad x) { return expq(x); }
inline quad real_log(quad x) { return logq(x); }
inline quad real_abs(quad x) { return fabsq(x); }

/// K(0, z)^2 at real z = (y-1)/(y+1) for closed-form initial data.
template <class T>
T k_squared_closed(const HerglotzEvaluator& h, T y) {
  if (!(y > T(0))) throw DomainError("k_squared_real: y must be > 0");
  const TraceParams& p = h.params();
  const T ab = static_cast<T>(p.alpha) * static_cast<T>(p.beta);
  const T a = p.a, b = p.b;
  switch (h.kind()) {
    case HerglotzEvaluator::Kind::stationary:
    case HerglotzEvaluator::Kind::free_initial: {
      const T m = p.max_square();
      return T(1) - m;
    }
    case HerglotzEvaluator::Kind::classical_independent: {
      // L and L + 2A both have the shape (u y^2 + v)/(2y) with u, v >= 0.
      const T y2 = y * y;
      const T lo = (T(1) + ab - T(2) * b) * y2 + (T(1) - ab - T(2) * a);
      const T hi = (T(1) + ab + T(2) * b) * y2 + (T(1) - ab + T(2) * a);
      return lo * hi / (T(4) * y2);
    }
    case HerglotzEvaluator::Kind::point_mass_zero:
      return (T(1) - b * b) * y * y;
    case HerglotzEvaluator::Kind::series:
      break;
  }
  throw ValidationError("k_squared_real: needs closed-form initial data");
}

}  // namespace liberation::detail
