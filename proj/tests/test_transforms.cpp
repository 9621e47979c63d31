#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "liberation/errors.hpp"
#include "liberation/moment_engine.hpp"
#include "liberation/quadrature.hpp"
#include "liberation/transforms.hpp"

using namespace liberation;

namespace {
constexpr double kPi = std::numbers::pi;

std::vector<cplx> disk_grid(double r_max, int radii, int angles) {
  std::vector<cplx> z;
  for (int i = 1; i <= radii; ++i) {
    for (int j = 0; j < angles; ++j) z.push_back(std::polar(r_max * i / radii, 2 * kPi * (j + 0.3) / angles));
  }
  return z;
}

// Herglotz transform of a two-atom law, written out directly.
cplx two_atoms(cplx z, double at_zero, double at_pi) {
  return at_zero * (1.0 + z) / (1.0 - z) + at_pi * (1.0 - z) / (1.0 + z);
}
}  // namespace

TEST(Herglotz, NormalisedAtOrigin) {
  const TraceParams p = TraceParams::from_traces(0.2, -0.4);
  for (InitialData k : {InitialData::free, InitialData::classical}) {
    EXPECT_NEAR(std::abs(HerglotzEvaluator::initial(k, p)(0.0) - 1.0), 0.0, 1e-15);
  }
  EXPECT_NEAR(std::abs(HerglotzEvaluator::stationary(p)(0.0) - 1.0), 0.0, 1e-15);
}

TEST(Herglotz, StationaryForZeroTracesIsOne) {
  const HerglotzEvaluator h = HerglotzEvaluator::stationary(TraceParams::from_traces(0.0, 0.0));
  for (cplx z : disk_grid(0.95, 4, 7)) EXPECT_NEAR(std::abs(h(z) - 1.0), 0.0, 1e-14);
}

TEST(Herglotz, ClassicalMatchesTwoAtoms) {
  // R S is a symmetry: mass (1 + alpha beta)/2 at angle 0.
  for (auto [al, be] : {std::pair{1.0, 1.0}, std::pair{0.2, -0.4}, std::pair{-0.7, 0.9}}) {
    const HerglotzEvaluator h = HerglotzEvaluator::classical_independent(TraceParams::from_traces(al, be));
    const double w0 = (1.0 + al * be) / 2.0;
    for (cplx z : disk_grid(0.9, 3, 5)) EXPECT_NEAR(std::abs(h(z) - two_atoms(z, w0, 1.0 - w0)), 0.0, 1e-13);
  }
  const HerglotzEvaluator id = HerglotzEvaluator::classical_independent(TraceParams::from_traces(1.0, 1.0));
  EXPECT_NEAR(id(0.5).real(), 3.0, 1e-15);
}

TEST(Herglotz, SeriesAgreesWithClosedForm) {
  const TraceParams p = TraceParams::from_traces(0.2, -0.4);
  const HerglotzEvaluator hs = HerglotzEvaluator::stationary(p);
  const HerglotzEvaluator series = HerglotzEvaluator::from_moments(stationary_moments(p, 400), p, 0.9);
  for (cplx z : disk_grid(0.8, 4, 6)) EXPECT_NEAR(std::abs(series(z) - hs(z)), 0.0, 1e-12);
  EXPECT_THROW(series(0.95), DomainError);
  EXPECT_LT(series.tail_bound(0.5), 1e-100);
}

TEST(Herglotz, PositiveRealPartInsideTheDisk) {
  for (auto [al, be] : {std::pair{0.2, -0.4}, std::pair{0.5, 0.3}, std::pair{-0.9, 0.1}}) {
    const TraceParams p = TraceParams::from_traces(al, be);
    for (InitialData k : {InitialData::free, InitialData::classical}) {
      const HerglotzEvaluator h = HerglotzEvaluator::initial(k, p);
      for (cplx z : disk_grid(0.97, 5, 9)) EXPECT_GT(h(z).real(), 0.0);
    }
  }
}

TEST(FreeConvolution, EqualsStationaryTransform) {
  for (auto [al, be] : {std::pair{0.2, -0.4}, std::pair{0.5, 0.3}, std::pair{0.99, -0.3}}) {
    const TraceParams p = TraceParams::from_traces(al, be);
    const HerglotzEvaluator hf = HerglotzEvaluator::free_initial(p);
    const HerglotzEvaluator hs = HerglotzEvaluator::stationary(p);
    for (cplx z : disk_grid(0.9, 5, 8)) EXPECT_LT(std::abs(hf(z) - hs(z)), 1e-10) << z;
  }
}

TEST(FreeConvolution, SingleFactorPieces) {
  const FreeConvolutionPipeline pipe(TraceParams::from_traces(0.5, 0.3));
  // S-transform of delta_1 is 1; for mean m the branch starts at 1/m.
  EXPECT_NEAR(std::abs(pipe.s_single(1e-9, 0.5) - 2.0), 0.0, 1e-8);
  const cplx z(0.2, 0.1);
  const cplx psi = pipe.psi_single(z, 0.5);
  EXPECT_NEAR(std::abs(psi - z * (z + 0.5) / (1.0 - z * z)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(pipe.chi_single(psi, 0.5) - z), 0.0, 1e-13);
  const cplx w = pipe.psi_product(z);
  EXPECT_NEAR(std::abs(pipe.chi_product(w) - z), 0.0, 1e-13);
}

TEST(KTransform, ConstantForStationaryLaw) {
  const TraceParams p = TraceParams::from_traces(0.2, -0.4);
  const HerglotzEvaluator hs = HerglotzEvaluator::stationary(p);
  EXPECT_LT(std::abs(K_eval(hs, 0.3) - std::sqrt(1.0 - 0.16)), 1e-10);
  for (cplx z : disk_grid(0.9, 4, 8)) EXPECT_LT(std::abs(K_eval(hs, z) - std::sqrt(0.84)), 1e-10);
}

TEST(KTransform, ZeroTracesReduceToH) {
  const TraceParams p = TraceParams::from_traces(0.0, 0.0);
  const HerglotzEvaluator h = HerglotzEvaluator::point_mass_zero(p);
  for (cplx z : disk_grid(0.9, 3, 5)) {
    EXPECT_LT(std::abs(K_eval(h, z) - h(z)), 1e-14);
    EXPECT_LT(std::abs(L_eval(h, z) - h(z)), 1e-14);
  }
}

TEST(LTransform, OriginAndEdge) {
  const TraceParams p = TraceParams::from_traces(0.2, -0.4);
  const HerglotzEvaluator hs = HerglotzEvaluator::stationary(p);
  EXPECT_NEAR(L_eval(hs, 0.0).real(), 1.0 - p.a - p.b, 1e-15);
  EXPECT_LT(std::abs(L_eval(hs, 0.999999)), 1e-2);
}

TEST(Cauchy, ArcsineLawForZeroTraces) {
  // Half an atom at 0 plus half the arcsine law: 1/4 + 1/(2 sqrt 2) at z = 2.
  const HerglotzEvaluator hs = HerglotzEvaluator::stationary(TraceParams::from_traces(0.0, 0.0));
  EXPECT_NEAR(std::abs(cauchy_eval(hs, 2.0) - (0.25 + 0.5 / std::sqrt(2.0))), 0.0, 1e-14);
  const cplx far = cauchy_eval(hs, 1e6);
  EXPECT_NEAR(far.real() * 1e6, 1.0, 1e-6);
  EXPECT_THROW(cauchy_eval(hs, 0.5), DomainError);
  EXPECT_LT(std::abs(cauchy_disk_point(cplx(3.0, 1.0))), 1.0);
}

TEST(StationaryDecomposition, Examples) {
  const CircleMeasure flat = stationary_decomposition(TraceParams::from_traces(0.0, 0.0));
  EXPECT_EQ(flat.atom_zero, 0.0);
  EXPECT_EQ(flat.atom_pi, 0.0);
  for (double d : flat.density) EXPECT_NEAR(d, 1.0 / (2 * kPi), 1e-12);

  const CircleMeasure two = stationary_decomposition(TraceParams::from_traces(1.0, 0.0));
  EXPECT_DOUBLE_EQ(two.atom_zero, 0.5);
  EXPECT_DOUBLE_EQ(two.atom_pi, 0.5);
  EXPECT_NEAR(two.continuous_mass(), 0.0, 1e-15);

  const CircleMeasure generic = stationary_decomposition(TraceParams::from_traces(0.2, -0.4));
  EXPECT_NO_THROW(generic.validate(1e-10));
  EXPECT_NEAR(generic.atom_pi, 0.3, 1e-15);
  EXPECT_NEAR(generic.atom_zero, 0.1, 1e-15);
}

TEST(DensityFromBoundary, RecoversStationaryDensity) {
  const QuadratureRule rule = midpoint_rule(0.0, kPi, 64);
  const CircleMeasure flat =
      density_from_boundary(HerglotzEvaluator::stationary(TraceParams::from_traces(0.0, 0.0)), 0.7, rule);
  for (double d : flat.density) EXPECT_NEAR(d, 1.0 / (2 * kPi), 1e-12);

  const TraceParams p = TraceParams::from_traces(0.2, -0.4);
  const CircleMeasure smooth = density_from_boundary(HerglotzEvaluator::stationary(p), 0.999, rule);
  for (std::size_t j = 0; j < rule.size(); ++j) {
    const double th = rule.nodes[j];
    if (th < p.theta_plus + 0.1 || th > p.theta_minus - 0.1) continue;
    EXPECT_NEAR(smooth.density[j], stationary_density(p, th), 2e-2) << th;
  }
}

TEST(PdeResidual, StationaryAndIdentity) {
  const TraceParams p = TraceParams::from_traces(0.2, -0.4);
  const MomentTrajectory still = evolve_moments(stationary_moments(p, 64), p, 0.5, 1e-3, 50);
  const std::vector<cplx> z = disk_grid(0.6, 3, 8);
  EXPECT_LT(pde_residual(still, p, z, {0.1, 0.25}), 1e-10);

  const TraceParams one = TraceParams::from_traces(1.0, 1.0);
  const MomentTrajectory fixed =
      evolve_moments(MomentSequence{0.0, std::vector<double>(64, 1.0)}, one, 0.5, 1e-3, 50);
  EXPECT_LT(pde_residual(fixed, one, disk_grid(0.5, 2, 6), {0.2}), 1e-10);
}

TEST(PdeResidual, HalvingTheStepQuartersIt) {
  const TraceParams p = TraceParams::from_traces(0.2, -0.4);
  const MomentSequence f0 = initial_moments(InitialData::classical, p, 64);
  const std::vector<cplx> z = disk_grid(0.6, 3, 8);
  const double coarse = pde_residual(evolve_moments(f0, p, 1.1, 1e-3, 1), p, z, {0.5, 1.0});
  const double fine = pde_residual(evolve_moments(f0, p, 1.1, 5e-4, 1), p, z, {0.5, 1.0});
  EXPECT_LT(coarse, 1e-5);
  EXPECT_GT(coarse / fine, 3.9);
}

TEST(PdeSource, MatchesCharacteristicForm) {
  const TraceParams p = TraceParams::from_traces(0.3, -0.6);
  const cplx z(0.3, 0.2);
  const double al = p.alpha, be = p.beta;
  const cplx expected = 2.0 * z * (al * z * z + 2.0 * be * z + al) * (be * z * z + 2.0 * al * z + be) /
                        std::pow(1.0 - z * z, 3);
  EXPECT_LT(std::abs(pde_source(z, p) - expected), 1e-14);
}
