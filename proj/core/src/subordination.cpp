#include "liberation/subordination.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "liberation/errors.hpp"
#include "liberation/moment_engine.hpp"
#include "real_math.hpp"

namespace liberation {

cplx characteristic_source(cplx phi, const TraceParams& p) { return pde_source(phi, p); }

cplx characteristic_source_derivative(cplx phi, const TraceParams& p) {
  const double al = p.alpha, be = p.beta;
  const cplx A = al * phi * phi + 2.0 * be * phi + al;
  const cplx B = be * phi * phi + 2.0 * al * phi + be;
  const cplx dA = 2.0 * al * phi + 2.0 * be;
  const cplx dB = 2.0 * be * phi + 2.0 * al;
  const cplx one_m = 1.0 - phi * phi;
  const cplx D = one_m * one_m * one_m;
  const cplx dD = -6.0 * phi * one_m * one_m;
  const cplx N = 2.0 * phi * A * B;
  const cplx dN = 2.0 * A * B + 2.0 * phi * (dA * B + A * dB);
  return (dN * D - N * dD) / (D * D);
}

namespace {

bool near_circle(cplx phi) { return !(std::abs(phi) < 1.0 - kFlowExitEps); }

std::size_t step_count(double t, double step) {
  if (!(step > 0.0)) throw ValidationError("flow: step must be > 0");
  if (!(t >= 0.0)) throw ValidationError("flow: t must be >= 0");
  return static_cast<std::size_t>(std::ceil(t / step - 1e-9));
}

// Fraction of the local time scale allowed per RK4 substep.
constexpr double kSubstepFraction = 5e-4;

// Near +-1 the source blows up and a characteristic can reach the circle
// within one nominal step. Steps are then cut, re-evaluated before every
// substep, so that neither the distance to the circle nor h changes by more
// than a small fraction.
double local_step(cplx phi, cplx h, double dt, const TraceParams& p) {
  const double gap = 1.0 - std::abs(phi);
  const double speed = std::abs(phi * h);
  const double source = std::abs(characteristic_source(phi, p));
  double local = std::numeric_limits<double>::infinity();
  if (speed > 0.0) local = gap / speed;
  if (source > 0.0) local = std::min(local, std::abs(h) / source);
  return std::min(dt, kSubstepFraction * local);
}

// One RK4 step of (phi, h). Returns false, leaving the state untouched, if a
// stage or the result gets too close to the circle.
bool rk4_step(cplx& phi, cplx& h, double dt, const TraceParams& p) {
  const cplx p1 = phi, h1 = h;
  const cplx kp1 = p1 * h1, kh1 = characteristic_source(p1, p);
  const cplx p2 = p1 + 0.5 * dt * kp1, h2 = h1 + 0.5 * dt * kh1;
  if (near_circle(p2)) return false;
  const cplx kp2 = p2 * h2, kh2 = characteristic_source(p2, p);
  const cplx p3 = p1 + 0.5 * dt * kp2, h3 = h1 + 0.5 * dt * kh2;
  if (near_circle(p3)) return false;
  const cplx kp3 = p3 * h3, kh3 = characteristic_source(p3, p);
  const cplx p4 = p1 + dt * kp3, h4 = h1 + dt * kh3;
  if (near_circle(p4)) return false;
  const cplx kp4 = p4 * h4, kh4 = characteristic_source(p4, p);
  const cplx pn = p1 + dt / 6.0 * (kp1 + 2.0 * kp2 + 2.0 * kp3 + kp4);
  const cplx hn = h1 + dt / 6.0 * (kh1 + 2.0 * kh2 + 2.0 * kh3 + kh4);
  if (near_circle(pn)) return false;
  if (!std::isfinite(std::abs(pn)) || !std::isfinite(std::abs(hn))) {
    throw NumericalHealthError("flow_ode: non-finite state");
  }
  phi = pn;
  h = hn;
  return true;
}

}  // namespace

std::vector<FlowState> flow_ode(cplx z0, const TraceParams& p, const HerglotzEvaluator& h0,
                                double t_end, double step, std::size_t record_stride) {
  if (!(std::abs(z0) < 1.0)) throw DomainError("flow_ode: seed must lie in the open unit disk");
  if (record_stride == 0) record_stride = 1;
  const std::size_t n = step_count(t_end, step);
  const double dt = n > 0 ? t_end / static_cast<double>(n) : step;

  std::vector<FlowState> out;
  FlowState s{0.0, z0, z0, h0(z0), !near_circle(z0)};
  out.push_back(s);
  if (!s.alive) return out;

  for (std::size_t k = 1; k <= n; ++k) {
    const double t_start = static_cast<double>(k - 1) * dt;
    double done = 0.0;
    bool ok = true;
    while (ok && done < dt) {
      double sub = local_step(s.phi, s.h, dt - done, p);
      // Avoid a sliver at the end of the nominal step.
      if (dt - done - sub < 1e-3 * sub) sub = dt - done;
      ok = rk4_step(s.phi, s.h, sub, p);
      if (ok) {
        done += sub;
        s.t = t_start + done;
      }
    }
    if (!ok) break;
    s.t = static_cast<double>(k) * dt;
    if (k % record_stride == 0 || k == n) out.push_back(s);
    if (k == n) return out;
  }
  if (n == 0) return out;
  // Died during the last attempted step: keep the last good values.
  if (out.back().t != s.t) out.push_back(s);
  out.back().alive = false;
  return out;
}

FlowEndpoint flow_endpoint(cplx z0, const TraceParams& p, const HerglotzEvaluator& h0, double t,
                           double step) {
  if (!(std::abs(z0) < 1.0)) throw DomainError("flow_endpoint: seed must lie in the open unit disk");
  const std::size_t n = step_count(t, step);
  const double dt = n > 0 ? t / static_cast<double>(n) : step;
  // (phi, h) and their derivatives (dphi, dh) with respect to the seed.
  cplx phi = z0, h = h0(z0), dphi = 1.0, dh = h0.derivative(z0);
  if (near_circle(phi)) return {phi, h, dphi, false};
  struct D {
    cplx phi, h, dphi, dh;
  };
  auto rhs = [&p](cplx ph, cplx hh, cplx dph, cplx dhh) {
    return D{ph * hh, characteristic_source(ph, p), dph * hh + ph * dhh,
             characteristic_source_derivative(ph, p) * dph};
  };
  for (std::size_t k = 1; k <= n; ++k) {
    double done = 0.0;
    while (done < dt) {
      double sub = local_step(phi, h, dt - done, p);
      if (dt - done - sub < 1e-3 * sub) sub = dt - done;
      done += sub;
      const D k1 = rhs(phi, h, dphi, dh);
      const cplx a2 = phi + 0.5 * sub * k1.phi;
      if (near_circle(a2)) return {phi, h, dphi, false};
      const D k2 =
          rhs(a2, h + 0.5 * sub * k1.h, dphi + 0.5 * sub * k1.dphi, dh + 0.5 * sub * k1.dh);
      const cplx a3 = phi + 0.5 * sub * k2.phi;
      if (near_circle(a3)) return {phi, h, dphi, false};
      const D k3 =
          rhs(a3, h + 0.5 * sub * k2.h, dphi + 0.5 * sub * k2.dphi, dh + 0.5 * sub * k2.dh);
      const cplx a4 = phi + sub * k3.phi;
      if (near_circle(a4)) return {phi, h, dphi, false};
      const D k4 = rhs(a4, h + sub * k3.h, dphi + sub * k3.dphi, dh + sub * k3.dh);
      phi += sub / 6.0 * (k1.phi + 2.0 * k2.phi + 2.0 * k3.phi + k4.phi);
      h += sub / 6.0 * (k1.h + 2.0 * k2.h + 2.0 * k3.h + k4.h);
      dphi += sub / 6.0 * (k1.dphi + 2.0 * k2.dphi + 2.0 * k3.dphi + k4.dphi);
      dh += sub / 6.0 * (k1.dh + 2.0 * k2.dh + 2.0 * k3.dh + k4.dh);
      if (near_circle(phi)) return {phi, h, dphi, false};
    }
  }
  return {phi, h, dphi, true};
}

cplx flow_invariant_defect(const FlowState& s, const HerglotzEvaluator& h0,
                           const HerglotzEvaluator& stationary) {
  const cplx h_inf_phi = stationary(s.phi);
  const cplx h_inf_z = stationary(s.z0);
  const cplx h_zero = h0(s.z0);
  return (s.h * s.h - h_inf_phi * h_inf_phi) - (h_zero * h_zero - h_inf_z * h_inf_z);
}

double flow_invariant_drift(const FlowState& s, const HerglotzEvaluator& h0,
                            const HerglotzEvaluator& stationary) {
  const double scale = std::max({1.0, std::norm(s.h), std::norm(stationary(s.phi))});
  return std::abs(flow_invariant_defect(s, h0, stationary)) / scale;
}

// ------------------------------------------------------------ closed form

namespace {

using detail::quad;
using detail::real_abs;
using detail::real_exp;
using detail::real_log;
using detail::real_sqrt;

template <class T>
struct Coefficients {
  T y, c, d;
};

template <class T>
Coefficients<T> coefficients(T z, const TraceParams& p, const HerglotzEvaluator& h0) {
  if (!(real_abs(z) < T(1))) throw DomainError("subordination_coefficients: need |z| < 1");
  Coefficients<T> sc{};
  sc.y = (T(1) + z) / (T(1) - z);
  const T ab = static_cast<T>(p.alpha) * static_cast<T>(p.beta);
  const T b2 = static_cast<T>(p.b) * static_cast<T>(p.b);
  sc.c = detail::k_squared_closed(h0, sc.y) + static_cast<T>(p.max_square());
  if (!(sc.c > T(0))) {
    std::ostringstream msg;
    msg << "subordination_coefficients: c = " << static_cast<double>(sc.c) << " <= 0 at z = "
        << static_cast<double>(z);
    throw DomainError(msg.str());
  }
  // 1 - y^2 written without cancellation.
  const T u = T(-4) * z / ((T(1) - z) * (T(1) - z));
  // The displayed d(y) divides a difference of square roots by 1 - y^2;
  // rationalised here so that it stays accurate as z -> 0.
  const T x = ((sc.c + ab) * u - b2 * u * u) / sc.c;
  if (!(T(1) - x >= T(0))) {
    std::ostringstream msg;
    msg << "subordination_coefficients: negative radicand in d at z = " << static_cast<double>(z);
    throw DomainError(msg.str());
  }
  sc.d = -sc.c - ab + T(2) * ((sc.c + ab) - b2 * u) / (T(1) + real_sqrt(T(1) - x));
  return sc;
}

// The formula in terms of E = d e^{t sqrt c}, or of q = 1/E once |E| > 1.
template <class T>
struct ClosedFormParts {
  T num;    // numerator of w^2
  T den;    // denominator of w^2
  T top;    // w^2 - 1 = top / den
  T plus;   // has the sign of the factor of den that vanishes when phi = 1
  T minus;  // has the sign of the factor of num that vanishes when phi = -1
};

template <class T>
ClosedFormParts<T> closed_form_parts(T z, T t, const TraceParams& p, const HerglotzEvaluator& h0) {
  const Coefficients<T> sc = coefficients(z, p, h0);
  const T c = sc.c, d = sc.d, rc = real_sqrt(c);
  const T ab = static_cast<T>(p.alpha) * static_cast<T>(p.beta);
  const T a = p.a, b = p.b;
  ClosedFormParts<T> out{};
  const T log_e = d != T(0) ? real_log(real_abs(d)) + t * rc : T(-1);
  if (d == T(0) || log_e <= T(0)) {
    const T e = d * real_exp(t * rc);
    out.num = (ab - c + e) * (ab - c + e) - T(4) * a * a * c;
    out.den = (ab + c + e) * (ab + c + e) - T(4) * b * b * c;
    out.top = T(-4) * c * e;
    out.plus = ab + c + e - T(2) * b * rc;
    out.minus = ab - c + e + T(2) * a * rc;
  } else {
    const T sgn = d > T(0) ? T(1) : T(-1);
    const T q = sgn * real_exp(-log_e);
    out.num = (T(1) + (ab - c) * q) * (T(1) + (ab - c) * q) - T(4) * a * a * c * q * q;
    out.den = (T(1) + (ab + c) * q) * (T(1) + (ab + c) * q) - T(4) * b * b * c * q * q;
    out.top = T(-4) * c * q;
    out.plus = sgn * (T(1) + (ab + c - T(2) * b * rc) * q);
    out.minus = sgn * (T(1) + (ab - c + T(2) * a * rc) * q);
  }
  return out;
}

template <class T>
bool in_domain(const ClosedFormParts<T>& parts, T z) {
  return z >= T(0) ? parts.plus > T(0) : parts.minus < T(0);
}

template <class T>
bool inside(T z, T t, const TraceParams& p, const HerglotzEvaluator& h0) {
  try {
    return in_domain(closed_form_parts(z, t, p, h0), z);
  } catch (const DomainError&) {
    return false;
  }
}

// phi = (w - 1)/(w + 1) = (w^2 - 1)/(w + 1)^2 with w = +sqrt(num/den).
template <class T>
T phi_from_parts(const ClosedFormParts<T>& parts, T z, T t) {
  const T prod = parts.num * parts.den;
  if (!(prod > T(0))) {
    std::ostringstream msg;
    msg << "phi_closed_form: negative quotient under the root at z = " << static_cast<double>(z)
        << ", t = " << static_cast<double>(t);
    throw DomainError(msg.str());
  }
  const T sgn = parts.den > T(0) ? T(1) : T(-1);
  return parts.top / (parts.num + parts.den + T(2) * sgn * real_sqrt(prod));
}

template <class T>
T phi_checked(T z, T t, const TraceParams& p, const HerglotzEvaluator& h0) {
  if (z == T(0)) return T(0);
  if (!(t >= T(0))) throw ValidationError("phi_closed_form: t must be >= 0");
  if (!h0.is_closed_form()) throw ValidationError("phi_closed_form: needs closed-form initial data");
  const ClosedFormParts<T> parts = closed_form_parts(z, t, p, h0);
  if (!in_domain(parts, z)) {
    std::ostringstream msg;
    msg << "phi_closed_form: z = " << static_cast<double>(z) << " is outside the flow domain at t = "
        << static_cast<double>(t);
    throw DomainError(msg.str());
  }
  const T phi = phi_from_parts(parts, z, t);
  if (!(real_abs(phi) <= T(1))) throw DomainError("phi_closed_form: result left the unit interval");
  return phi;
}

}  // namespace

SubordinationCoefficients subordination_coefficients(long double z, const TraceParams& p,
                                                     const HerglotzEvaluator& h0) {
  const Coefficients<long double> sc = coefficients(z, p, h0);
  return {sc.y, sc.c, sc.d};
}

long double phi_closed_form_extended(long double z, long double t, const TraceParams& p,
                                     const HerglotzEvaluator& h0) {
  return phi_checked(z, t, p, h0);
}

double phi_closed_form(double z, double t, const TraceParams& p, const HerglotzEvaluator& h0) {
  return static_cast<double>(phi_checked<long double>(z, t, p, h0));
}

double phi_formula(double z, double t, const TraceParams& p, const HerglotzEvaluator& h0) {
  if (z == 0.0) return 0.0;
  if (!(t >= 0.0)) throw ValidationError("phi_formula: t must be >= 0");
  if (!h0.is_closed_form()) throw ValidationError("phi_formula: needs closed-form initial data");
  const long double zl = z, tl = t;
  return static_cast<double>(phi_from_parts(closed_form_parts(zl, tl, p, h0), zl, tl));
}

DomainBoundary domain_boundary(double t, const TraceParams& p, const HerglotzEvaluator& h0) {
  DomainBoundary out;
  if (!(t > 0.0)) return out;
  if (!h0.is_closed_form()) throw ValidationError("domain_boundary: needs closed-form initial data");

  // phi_t - 1 behaves like a square root of the distance to the edge, so the
  // edge is located and checked in binary128.
  const quad tq = t;
  std::vector<quad> probes;
  for (int j = 1; j <= 8; ++j) probes.push_back(quad(0.03125) * j);
  for (int j = 3; j <= 128; ++j) {
    const quad x = quad(1) - real_exp(-real_log(quad(10)) * quad(j) / quad(8));
    if (x > probes.back() && x < quad(1)) probes.push_back(x);
  }

  bool found_any = false;
  for (const quad side : {quad(1), quad(-1)}) {
    if (!inside(side * quad(1e-3), tq, p, h0)) {
      throw NumericalHealthError("domain_boundary: the origin is not inside the flow domain");
    }
    quad lo = quad(1e-3), hi = quad(-1);
    for (const quad x : probes) {
      if (inside(side * x, tq, p, h0)) {
        lo = x;
      } else {
        hi = x;
        break;
      }
    }
    if (hi < quad(0)) continue;
    for (int it = 0; it < 400 && hi - lo > scalbnq(quad(4), -112) * hi; ++it) {
      const quad mid = (lo + hi) / quad(2);
      (inside(side * mid, tq, p, h0) ? lo : hi) = mid;
    }
    found_any = true;
    // At the edge |phi| may exceed 1 by a rounding unit, so no range check.
    const double phi_edge = static_cast<double>(
        phi_from_parts(closed_form_parts(side * lo, tq, p, h0), side * lo, tq));
    // Keep the inside end so that evaluating phi there is legal.
    long double extended = static_cast<long double>(lo);
    if (static_cast<quad>(extended) > lo) extended = std::nextafter(extended, 0.0L);
    double rounded = static_cast<double>(lo);
    if (static_cast<quad>(rounded) > lo) rounded = std::nextafter(rounded, 0.0);
    if (side > quad(0)) {
      out.x_plus_extended = extended;
      out.x_plus = rounded;
      out.phi_at_plus = phi_edge;
    } else {
      out.x_minus_extended = -extended;
      out.x_minus = -rounded;
      out.phi_at_minus = phi_edge;
    }
  }
  if (!found_any) {
    throw DomainError(
        "domain_boundary: unsupported configuration, the flow domain still reaches both +1 and -1");
  }
  return out;
}

// ---------------------------------------------------------------- inverse

cplx eta_inverse(cplx z, double t, const TraceParams& p, const HerglotzEvaluator& h0,
                 const InverseOptions& opt) {
  if (!(std::abs(z) < 1.0)) throw DomainError("eta_inverse: need |z| < 1");
  if (!(t >= 0.0)) throw ValidationError("eta_inverse: t must be >= 0");
  if (z == 0.0 || t == 0.0) return z;

  cplx eta = z;
  double t_done = 0.0;
  double stage = opt.t_stage;
  while (t_done < t) {
    const double t_next = std::min(t, t_done + stage);
    cplx w = eta;
    bool ok = false;
    FlowEndpoint e = flow_endpoint(w, p, h0, t_next, opt.step);
    for (int it = 0; it < opt.max_newton && e.alive; ++it) {
      const cplx residual = e.phi - z;
      if (std::abs(residual) < opt.tol) {
        ok = true;
        break;
      }
      cplx dw = residual / e.dphi;
      // Damp until the new seed is still alive and the residual shrinks.
      bool accepted = false;
      for (int halving = 0; halving < 30; ++halving) {
        const cplx trial = w - dw;
        if (std::abs(trial) < 1.0) {
          const FlowEndpoint f = flow_endpoint(trial, p, h0, t_next, opt.step);
          if (f.alive && std::abs(f.phi - z) < std::abs(residual)) {
            w = trial;
            e = f;
            accepted = true;
            break;
          }
        }
        dw *= 0.5;
      }
      if (!accepted) {
        // Stalled at rounding level: accept if already close.
        ok = std::abs(residual) < 1e2 * opt.tol;
        break;
      }
    }
    if (ok) {
      eta = w;
      t_done = t_next;
      stage = std::min(opt.t_stage, 1.5 * stage);
    } else {
      stage *= 0.5;
      if (stage < 1e-6) {
        std::ostringstream msg;
        msg << "eta_inverse: Newton continuation stalled at t = " << t_done << " for z = " << z
            << "; try a smaller t or a finer continuation stage";
        throw NumericalHealthError(msg.str());
      }
    }
  }
  return eta;
}

double subordination_check(const TraceParams& p, const HerglotzEvaluator& h0,
                           const std::vector<cplx>& z_grid, const std::vector<double>& t_grid,
                           const SubordinationOptions& opt) {
  MomentSequence f0 = taylor_moments(h0, opt.n_moments);
  f0.t = 0.0;
  double worst = 0.0;
  for (double t : t_grid) {
    const MomentTrajectory traj = evolve_moments(f0, p, t, opt.moment_step, 1u << 30);
    const HerglotzEvaluator ht = HerglotzEvaluator::from_moments(traj.states.back(), p, 0.95);
    for (cplx z : z_grid) {
      const cplx k_t = K_eval(ht, z);
      const cplx k_0 = K_eval(h0, eta_inverse(z, t, p, h0, opt.inverse));
      worst = std::max(worst, std::abs(k_t - k_0));
    }
  }
  return worst;
}

void write_flow_csv(std::ostream& os, const std::vector<FlowState>& states,
                    const std::vector<double>& deviation) {
  os << "t,z0_re,z0_im,phi_re,phi_im,h_re,h_im,alive,closed_form_deviation\n"
     << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < states.size(); ++i) {
    const FlowState& s = states[i];
    os << s.t << ',' << s.z0.real() << ',' << s.z0.imag() << ',' << s.phi.real() << ','
       << s.phi.imag() << ',' << s.h.real() << ',' << s.h.imag() << ',' << (s.alive ? 1 : 0) << ',';
    if (i < deviation.size() && std::isfinite(deviation[i])) os << deviation[i];
    os << '\n';
  }
}

}  // namespace liberation
