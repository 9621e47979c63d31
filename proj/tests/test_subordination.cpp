#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "liberation/errors.hpp"
#include "liberation/subordination.hpp"
#include "liberation/transforms.hpp"

using namespace liberation;

namespace {

using lcplx = std::complex<long double>;

// Reference integrator for the characteristic system, written from scratch:
// long double RK4 with a fine fixed step.
lcplx reference_phi(lcplx z0, long double t, long double al, long double be, lcplx h0) {
  auto source = [&](lcplx p) {
    const lcplx p2 = p * p;
    return (4.0L * (al * al + be * be) * p2 * (1.0L + p2) + 2.0L * al * be * p * (1.0L + 6.0L * p2 + p2 * p2)) /
           ((1.0L - p2) * (1.0L - p2) * (1.0L - p2));
  };
  const int steps = 200000;
  const long double dt = t / steps;
  lcplx phi = z0, h = h0;
  for (int k = 0; k < steps; ++k) {
    const lcplx k1p = phi * h, k1h = source(phi);
    const lcplx p2 = phi + 0.5L * dt * k1p, h2 = h + 0.5L * dt * k1h;
    const lcplx k2p = p2 * h2, k2h = source(p2);
    const lcplx p3 = phi + 0.5L * dt * k2p, h3 = h + 0.5L * dt * k2h;
    const lcplx k3p = p3 * h3, k3h = source(p3);
    const lcplx p4 = phi + dt * k3p, h4 = h + dt * k3h;
    const lcplx k4p = p4 * h4, k4h = source(p4);
    phi += dt / 6.0L * (k1p + 2.0L * k2p + 2.0L * k3p + k4p);
    h += dt / 6.0L * (k1h + 2.0L * k2h + 2.0L * k3h + k4h);
  }
  return phi;
}

lcplx classical_h(lcplx z, long double al, long double be) {
  return (1.0L + 2.0L * al * be * z + z * z) / (1.0L - z * z);
}

}  // namespace

TEST(Flow, OriginIsFixed) {
  const TraceParams p = TraceParams::from_traces(0.2, -0.4);
  const auto traj = flow_ode(0.0, p, HerglotzEvaluator::classical_independent(p), 1.0, 1e-3, 100);
  for (const FlowState& s : traj) {
    EXPECT_EQ(s.phi, cplx(0.0));
    EXPECT_NEAR(std::abs(s.h - 1.0), 0.0, 1e-15);
  }
}

TEST(Flow, ZeroTracesHaveExplicitSolution) {
  const TraceParams p = TraceParams::from_traces(0.0, 0.0);
  const HerglotzEvaluator h0 = HerglotzEvaluator::point_mass_zero(p);
  // 0.1 e^{11/9}, from a 20-digit evaluation.
  const FlowEndpoint e = flow_endpoint(0.1, p, h0, 1.0, 1e-4);
  EXPECT_NEAR(e.phi.real(), 0.33947231870989033, 1e-10);
  EXPECT_NEAR(phi_closed_form(0.1, 1.0, p, h0), 0.33947231870989033, 1e-12);
  for (cplx z0 : {cplx(0.2, 0.1), cplx(-0.3, 0.2)}) {
    const cplx exact = z0 * std::exp(0.8 * (1.0 + z0) / (1.0 - z0));
    EXPECT_LT(std::abs(flow_endpoint(z0, p, h0, 0.8, 1e-4).phi - exact), 1e-10);
  }
}

TEST(Flow, MatchesReferenceIntegrator) {
  for (auto [al, be, x, t] : {std::tuple{0.2, -0.4, 0.2, 1.0}, std::tuple{0.7, -0.6, 0.3, 0.5},
                              std::tuple{0.2, -0.4, -0.07, 2.0}}) {
    const TraceParams p = TraceParams::from_traces(al, be);
    const HerglotzEvaluator h0 = HerglotzEvaluator::classical_independent(p);
    const lcplx z0 = x;
    const lcplx ref = reference_phi(z0, t, al, be, classical_h(z0, al, be));
    EXPECT_NEAR(flow_endpoint(x, p, h0, t).phi.real(), static_cast<double>(ref.real()), 1e-10);
    EXPECT_NEAR(phi_closed_form(x, t, p, h0), static_cast<double>(ref.real()), 1e-10);
  }
}

TEST(Flow, InvariantIsConserved) {
  const TraceParams p = TraceParams::from_traces(0.5, 0.3);
  const HerglotzEvaluator h0 = HerglotzEvaluator::free_initial(p);
  const HerglotzEvaluator hs = HerglotzEvaluator::stationary(p);
  for (int j = 0; j < 6; ++j) {
    const cplx z0 = std::polar(0.5, 2 * std::numbers::pi * (j + 0.5) / 6);
    for (const FlowState& s : flow_ode(z0, p, h0, 2.0, 1e-4, 200)) {
      EXPECT_LT(flow_invariant_drift(s, h0, hs), 1e-8);
    }
  }
}

TEST(Flow, ExitIsFlaggedNotThrown) {
  const TraceParams p = TraceParams::from_traces(0.6, 0.2);
  const auto traj = flow_ode(0.9, p, HerglotzEvaluator::classical_independent(p), 5.0, 1e-3, 100);
  EXPECT_FALSE(traj.back().alive);
  EXPECT_LT(std::abs(traj.back().phi), 1.0);
  EXPECT_THROW(flow_ode(0.1, p, HerglotzEvaluator::classical_independent(p), 1.0, 0.0), ValidationError);
}

TEST(ClosedForm, FreeDataAgainstFlow) {
  const TraceParams p = TraceParams::from_traces(0.2, -0.4);
  const HerglotzEvaluator h0 = HerglotzEvaluator::free_initial(p);
  EXPECT_EQ(phi_closed_form(0.0, 1.0, p, h0), 0.0);
  // The right edge of the domain is near 0.52, 0.32 and 0.12 at these times.
  for (auto [x, t] : {std::pair{0.5, 0.5}, std::pair{0.25, 1.0}, std::pair{0.1, 2.0}, std::pair{-0.2, 1.0}}) {
    EXPECT_LT(std::abs(phi_closed_form(x, t, p, h0) - flow_endpoint(x, p, h0, t).phi.real()), 1e-6);
  }
  EXPECT_THROW(phi_closed_form(0.5, 1.0, p, h0), DomainError);
  EXPECT_FALSE(flow_ode(0.5, p, h0, 1.0, 1e-4, 100).back().alive);
}

TEST(ClosedForm, OutsideDomainIsAnError) {
  const TraceParams p = TraceParams::from_traces(0.0, 0.0);
  const HerglotzEvaluator h0 = HerglotzEvaluator::point_mass_zero(p);
  // phi_1(0.3) would be 0.3 e^{13/7} > 1.
  EXPECT_THROW(phi_closed_form(0.3, 1.0, p, h0), DomainError);
}

TEST(ClosedForm, LimitAtTheEdgesVanishes) {
  const TraceParams p = TraceParams::from_traces(0.6, 0.2);
  const HerglotzEvaluator h0 = HerglotzEvaluator::classical_independent(p);
  for (double sign : {1.0, -1.0}) {
    double previous = 1.0;
    for (int k = 3; k <= 6; ++k) {
      const double v = std::abs(phi_formula(sign * (1.0 - std::pow(10.0, -k)), 1.0, p, h0));
      EXPECT_LE(v, previous + 1e-3);
      previous = v;
    }
    EXPECT_LT(previous, 1e-3);
  }
}

TEST(DomainBoundary, EndpointsMapToTheCircle) {
  const TraceParams p = TraceParams::from_traces(0.6, 0.2);
  const HerglotzEvaluator h0 = HerglotzEvaluator::classical_independent(p);
  const DomainBoundary at0 = domain_boundary(0.0, p, h0);
  EXPECT_EQ(at0.x_minus, -1.0);
  EXPECT_EQ(at0.x_plus, 1.0);
  double last_plus = 1.0;
  for (double t : {0.25, 0.5, 1.0, 2.0}) {
    const DomainBoundary b = domain_boundary(t, p, h0);
    EXPECT_NEAR(b.phi_at_plus, 1.0, 1e-9);
    EXPECT_NEAR(b.phi_at_minus, -1.0, 1e-9);
    EXPECT_GT(b.x_minus, -1.0);
    EXPECT_LT(b.x_plus, last_plus);
    last_plus = b.x_plus;
  }
}

TEST(EtaInverse, RoundTripAndSchwarzBound) {
  const TraceParams p = TraceParams::from_traces(0.2, -0.4);
  const HerglotzEvaluator h0 = HerglotzEvaluator::free_initial(p);
  EXPECT_EQ(eta_inverse(0.0, 1.0, p, h0), cplx(0.0));
  for (cplx z : {cplx(0.3, 0.2), cplx(-0.5, 0.1), cplx(0.0, 0.6)}) {
    const cplx eta = eta_inverse(z, 1.0, p, h0);
    EXPECT_LE(std::abs(eta), std::abs(z));
    EXPECT_LT(std::abs(flow_endpoint(eta, p, h0, 1.0).phi - z), 1e-9);
  }
}

TEST(Subordination, KIsCarriedByTheInverseFlow) {
  const std::vector<cplx> z{cplx(0.3, 0.2), cplx(-0.5, 0.3), cplx(0.6, -0.1)};
  const TraceParams p0 = TraceParams::from_traces(0.0, 0.0);
  EXPECT_LT(subordination_check(p0, HerglotzEvaluator::point_mass_zero(p0), z, {0.0}), 1e-14);
  EXPECT_LT(subordination_check(p0, HerglotzEvaluator::point_mass_zero(p0), z, {0.5, 1.0}), 1e-6);
  const TraceParams p = TraceParams::from_traces(0.2, -0.4);
  EXPECT_LT(subordination_check(p, HerglotzEvaluator::free_initial(p), z, {1.0}), 1e-6);
}
