#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "liberation/bridge.hpp"
#include "liberation/errors.hpp"
#include "liberation/moment_engine.hpp"
#include "liberation/quadrature.hpp"
#include "liberation/transforms.hpp"

using namespace liberation;

TEST(Binomial, ExactValues) {
  EXPECT_EQ(binomial(10, 3), 120.0L);
  EXPECT_EQ(binomial(30, 15), 155117520.0L);
  EXPECT_EQ(binomial(60, 30), 118264581564861424.0L);
  EXPECT_EQ(binomial(5, 7), 0.0L);
  // Beyond the exact range: log-gamma, relative accuracy.
  EXPECT_NEAR(static_cast<double>(binomial(100, 50) / 1.0089134454556419e29L), 1.0, 1e-12);
}

TEST(ProjectMoments, FirstMoment) {
  const TraceParams p = TraceParams::from_traces(0.2, -0.4);
  const MomentSequence f{0.0, {0.37}};
  EXPECT_NEAR(project_moments(f, p, 1)[0], 0.25 + (0.2 - 0.4) / 4 + 0.37 / 4, 1e-16);
  // f_1 = alpha beta is the free value: m_1 = tau(P) tau(Q).
  const MomentSequence free{0.0, {p.alpha * p.beta}};
  EXPECT_NEAR(project_moments(free, p, 1)[0], p.tau_p() * p.tau_q(), 1e-16);
}

TEST(ProjectMoments, IdentityProjections) {
  const TraceParams p = TraceParams::from_traces(1.0, 1.0);
  for (double m : project_moments(MomentSequence{0.0, std::vector<double>(20, 1.0)}, p, 20)) {
    EXPECT_NEAR(m, 1.0, 1e-14);
  }
}

TEST(ProjectMoments, TriangularAndRejectsShortInput) {
  const TraceParams p = TraceParams::from_traces(0.3, 0.1);
  MomentSequence f = initial_moments(InitialData::free, p, 8);
  const auto m = project_moments(f, p, 8);
  f.f[5] += 0.1;
  const auto bumped = project_moments(f, p, 8);
  for (int n = 0; n < 5; ++n) EXPECT_EQ(m[n], bumped[n]);
  EXPECT_THROW(project_moments(f, p, 9), ValidationError);
}

TEST(ProjectMoments, RoundTrip) {
  const TraceParams p = TraceParams::from_traces(0.2, -0.4);
  const MomentSequence f = evolve_moments(initial_moments(InitialData::classical, p, 16), p, 0.7, 1e-3, 1000).states.back();
  const MomentSequence back8 = symmetry_moments(project_moments(f, p, 8), p);
  for (int n = 0; n < 8; ++n) EXPECT_NEAR(back8.f[n], f.f[n], 1e-10);
  const auto m = project_moments(f, p, 16);
  const auto again = project_moments(symmetry_moments(m, p), p, 16);
  for (int n = 0; n < 16; ++n) EXPECT_NEAR(again[n], m[n], 1e-10);
}

TEST(MeasureBridge, IdentityProjections) {
  IntervalMeasure at_one;
  at_one.atom_one = 1.0;
  const CircleMeasure nu = measure_nu_from_mu(at_one, TraceParams::from_traces(1.0, 1.0));
  EXPECT_NEAR(nu.atom_zero, 1.0, 1e-15);
  EXPECT_NEAR(nu.atom_pi, 0.0, 1e-15);
}

TEST(MeasureBridge, InconsistentTracesAreReported) {
  IntervalMeasure at_one;
  at_one.atom_one = 1.0;
  // Claims tau(P) = tau(Q) = 1/2, but x = 1 almost surely.
  try {
    measure_nu_from_mu(at_one, TraceParams::from_traces(0.0, 0.0));
    FAIL() << "expected a ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("atom"), std::string::npos);
  }
}

TEST(MeasureBridge, StationaryLawMomentsAgree) {
  for (auto [al, be] : {std::pair{0.0, 0.0}, std::pair{0.2, -0.4}, std::pair{0.5, 0.3}}) {
    const TraceParams p = TraceParams::from_traces(al, be);
    const CircleMeasure nu = stationary_decomposition(p, 800);
    const IntervalMeasure mu = measure_mu_from_nu(nu, p);
    EXPECT_NO_THROW(mu.validate(1e-8));
    const auto m = mu.moments(10);
    const auto predicted = project_moments(stationary_moments(p, 10), p, 10);
    for (int n = 0; n < 10; ++n) EXPECT_NEAR(m[n], predicted[n], 1e-8);
    // And back again.
    const CircleMeasure again = measure_nu_from_mu(mu, p);
    EXPECT_NEAR(again.atom_pi, nu.atom_pi, 1e-14);
    EXPECT_NEAR(again.atom_zero, nu.atom_zero, 1e-14);
  }
}

TEST(MeasureBridge, ZeroTracesGiveUniformCircle) {
  // mu_infinity for tau(P) = tau(Q) = 1/2: half an atom at 0 and half the arcsine law.
  const TraceParams p = TraceParams::from_traces(0.0, 0.0);
  const QuadratureRule rule = midpoint_rule(0.0, 1.0, 2000);
  IntervalMeasure mu;
  mu.atom_zero = 0.5;
  mu.grid = rule.nodes;
  mu.weights = rule.weights;
  for (double x : rule.nodes) mu.density.push_back(0.5 / (std::numbers::pi * std::sqrt(x * (1 - x))));
  const CircleMeasure nu = measure_nu_from_mu(mu, p);
  EXPECT_NEAR(nu.atom_pi, 0.0, 1e-15);
  EXPECT_NEAR(nu.atom_zero, 0.0, 1e-15);
  for (double d : nu.density) EXPECT_NEAR(d, 1.0 / (2 * std::numbers::pi), 1e-12);
}

TEST(Sigma, MassAndAgreementOfBothRoutes) {
  const TraceParams p = TraceParams::from_traces(0.2, -0.4);
  const CircleMeasure nu = stationary_decomposition(p);
  const CircleMeasure s1 = sigma_from_nu(nu, p);
  const CircleMeasure s2 = sigma_from_mu(measure_mu_from_nu(nu, p), p);
  EXPECT_NEAR(s1.total_mass(), 1.0 - p.a - p.b, 1e-6);
  EXPECT_NEAR(s1.atom_zero, s2.atom_zero, 1e-12);
  EXPECT_NEAR(s1.atom_pi, s2.atom_pi, 1e-12);
  for (std::size_t j = 0; j < s1.density.size(); ++j) EXPECT_NEAR(s1.density[j], s2.density[j], 1e-12);

  const TraceParams zero = TraceParams::from_traces(0.0, 0.0);
  const CircleMeasure flat = stationary_decomposition(zero);
  EXPECT_NEAR(sigma_from_nu(flat, zero).total_mass(), flat.total_mass(), 1e-15);
  CircleMeasure short_atom = nu;
  short_atom.atom_pi = 0.1;
  EXPECT_THROW(sigma_from_nu(short_atom, p), ValidationError);
}

TEST(StationaryProjectionDensity, MatchesPulledBackArc) {
  const TraceParams p = TraceParams::from_traces(0.2, -0.4);
  const IntervalMeasure mu = measure_mu_from_nu(stationary_decomposition(p), p);
  for (std::size_t j = 0; j < mu.grid.size(); j += 50) {
    const double exact = stationary_projection_density(p, mu.grid[j]);
    EXPECT_LT(std::abs(mu.density[j] - exact), 1e-9 * exact + 1e-11) << mu.grid[j];
  }
}
