#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "liberation/params.hpp"
#include "liberation/transforms.hpp"

namespace liberation {

/// A point of the characteristic t -> (phi_t(z0), H(t, phi_t(z0))).
struct FlowState {
  double t = 0.0;
  cplx z0;
  cplx phi;
  cplx h;
  bool alive = true;
};

/// Seeds whose image gets within this distance of the unit circle are dead.
inline constexpr double kFlowExitEps = 1e-9;

/// Velocity of H along a characteristic:
///   (4(a^2+b^2) p^2 (1+p^2) + 2 a b p (1 + 6p^2 + p^4)) / (1 - p^2)^3
/// with a, b the traces. Equals pde_source(p).
cplx characteristic_source(cplx phi, const TraceParams& p);
cplx characteristic_source_derivative(cplx phi, const TraceParams& p);

/// RK4 on phi' = phi h, h' = characteristic_source(phi), phi(0) = z0,
/// h(0) = H(0, z0). Every `record_stride`-th step is stored. A step is split
/// into substeps when the local time scale near the circle gets shorter than
/// it. Integration stops at the first stage with |phi| >= 1 - kFlowExitEps;
/// the last stored state then has alive = false and carries the last good values.
std::vector<FlowState> flow_ode(cplx z0, const TraceParams& p, const HerglotzEvaluator& h0,
                                double t_end, double step = 1e-4, std::size_t record_stride = 1);

/// phi_t(z0) together with d phi_t / d z0, from the flow and its tangent.
struct FlowEndpoint {
  cplx phi;
  cplx h;
  cplx dphi;
  bool alive = true;
};
FlowEndpoint flow_endpoint(cplx z0, const TraceParams& p, const HerglotzEvaluator& h0, double t,
                           double step = 1e-4);

/// h^2 - H_inf(phi)^2 - (H(0,z0)^2 - H_inf(z0)^2); zero along exact characteristics.
cplx flow_invariant_defect(const FlowState& s, const HerglotzEvaluator& h0,
                           const HerglotzEvaluator& stationary);
/// |flow_invariant_defect| / max(1, |h|^2, |H_inf(phi)|^2). Near the atoms at
/// +-1 both squares grow without bound and only this ratio is meaningful.
double flow_invariant_drift(const FlowState& s, const HerglotzEvaluator& h0,
                            const HerglotzEvaluator& stationary);

/// Coefficients of the explicit solution on the real axis at y = (1+z)/(1-z).
struct SubordinationCoefficients {
  long double y = 1.0L;
  long double c = 0.0L;
  long double d = 0.0L;
};
/// Throws DomainError if c <= 0 or the radicand inside d is negative.
SubordinationCoefficients subordination_coefficients(long double z, const TraceParams& p,
                                                     const HerglotzEvaluator& h0);

/// Explicit phi_t(z) for real z in the flow domain. Needs closed-form
/// initial data. Throws DomainError when the formula leaves its domain
/// (z outside the flow domain, or a negative quotient under the root).
double phi_closed_form(double z, double t, const TraceParams& p, const HerglotzEvaluator& h0);
long double phi_closed_form_extended(long double z, long double t, const TraceParams& p,
                                     const HerglotzEvaluator& h0);

/// The displayed expression (w - 1)/(w + 1), w = +sqrt(num/den), with no
/// check that z lies in the flow domain. Beyond the domain edge it no longer
/// equals phi_t; it is what the limit z -> +-1 statement is about. Throws
/// DomainError if the quotient under the root is negative.
double phi_formula(double z, double t, const TraceParams& p, const HerglotzEvaluator& h0);

/// Real endpoints of the flow domain at time t, with phi_t(x_minus) = -1
/// and phi_t(x_plus) = 1. At t = 0 both are the sentinels -1 and 1.
struct DomainBoundary {
  double x_minus = -1.0;
  double x_plus = 1.0;
  long double x_minus_extended = -1.0L;
  long double x_plus_extended = 1.0L;
  /// phi_t at the endpoints, evaluated in binary128 at the unrounded edge.
  double phi_at_minus = -1.0;
  double phi_at_plus = 1.0;
};
/// Bisection in binary128 on the sign of the factor that vanishes at the
/// edge. Throws DomainError ("unsupported configuration") if the domain
/// still reaches both +1 and -1 at time t.
DomainBoundary domain_boundary(double t, const TraceParams& p, const HerglotzEvaluator& h0);

struct InverseOptions {
  double step = 1e-4;      // RK4 step for the forward flow
  double t_stage = 0.05;   // continuation stage in t
  double tol = 1e-12;      // target |phi_t(eta) - z|
  int max_newton = 40;
};
/// eta_t(z): the point of the flow domain mapped to z. Newton on the forward
/// flow, continued in t from eta_0 = id. Throws NumericalHealthError if
/// continuation stalls.
cplx eta_inverse(cplx z, double t, const TraceParams& p, const HerglotzEvaluator& h0,
                 const InverseOptions& opt = {});

struct SubordinationOptions {
  std::size_t n_moments = 96;
  double moment_step = 1e-3;
  InverseOptions inverse;
};
/// max |K(t, z) - K(0, eta_t(z))| over the grids, with K(t, .) built from
/// evolved moments and K(0, .) from the initial evaluator.
double subordination_check(const TraceParams& p, const HerglotzEvaluator& h0,
                           const std::vector<cplx>& z_grid, const std::vector<double>& t_grid,
                           const SubordinationOptions& opt = {});

/// CSV with header t,z0_re,z0_im,phi_re,phi_im,h_re,h_im,alive,closed_form_deviation.
/// `deviation` is either empty or parallel to `states`; NaN prints as empty.
void write_flow_csv(std::ostream& os, const std::vector<FlowState>& states,
                    const std::vector<double>& deviation = {});

}  // namespace liberation
