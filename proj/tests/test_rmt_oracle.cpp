#include <cmath>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "liberation/errors.hpp"
#include "liberation/rmt.hpp"
#include "liberation/transforms.hpp"

using namespace liberation;

namespace {
double normalised_trace_real(const CMatrix& m) { return m.trace().real() / static_cast<double>(m.rows()); }
}  // namespace

TEST(Gue, Normalisation) {
  Rng rng(3);
  const CMatrix g = gue_increment(200, rng);
  EXPECT_LT((g - g.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_NEAR(normalised_trace_real(g * g), 1.0, 0.02);
}

TEST(UnitaryBrownianMotion, StartsAtIdentity) {
  Rng rng(1);
  EXPECT_TRUE(evolve_unitary(8, 0.0, 0.01, rng).isApprox(CMatrix::Identity(8, 8)));
}

TEST(UnitaryBrownianMotion, StaysUnitaryOverManySteps) {
  Rng rng(11);
  UnitaryBrownianMotion bm(32, 1e-3);
  bm.advance_to(10.0, rng);
  EXPECT_EQ(bm.steps(), 10000u);
  EXPECT_LT(unitarity_defect(bm.matrix()), 1e-10);
}

TEST(UnitaryBrownianMotion, MeanTraceDecaysLikeHalfRate) {
  // E (1/N) tr U_t = e^{-t/2}; estimator spread across 40 samples at N = 256.
  const std::size_t n = 256, samples = 40;
  std::vector<double> v;
  for (std::size_t i = 0; i < samples; ++i) {
    Rng rng(stream_seed(99, i));
    v.push_back(normalised_trace_real(evolve_unitary(n, 1.0, 0.01, rng)));
  }
  double mean = 0.0;
  for (double x : v) mean += x / samples;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double se = std::sqrt(ss / (samples - 1) / samples);
  EXPECT_LT(std::abs(mean - 0.60653065971263342), 3.0 * se + 1e-3);
}

TEST(BuildPair, PresetsAtTimeZero) {
  Rng rng(5);
  const ProjectionPair eq = build_pair(64, 0.25, 0.25, PairPreset::equal, rng);
  const EmpiricalMoments em = empirical_moments(eq, CMatrix::Identity(64, 64), 5);
  for (double f : em.symmetry) EXPECT_NEAR(f, 1.0, 1e-12);
  EXPECT_NEAR(eq.alpha, 0.25, 1e-15);
  EXPECT_LT((eq.R * eq.R - CMatrix::Identity(64, 64)).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(build_pair(64, 0.25, 0.5, PairPreset::equal, rng), ValidationError);
}

TEST(BuildPair, ClassicalPresetFirstMoment) {
  EnsembleConfig c;
  c.n = 512;
  c.alpha = 0.2;
  c.beta = -0.4;
  c.preset = PairPreset::classical;
  c.n_samples = 20;
  c.n_moments = 2;
  c.t_grid = {0.0};
  c.seed = 17;
  const MonteCarloResult r = monte_carlo(c);
  const MonteCarloRow& f1 = r.at("symmetry", 0.0, 1);
  EXPECT_LT(std::abs(f1.mean - r.alpha * r.beta), 3.0 * f1.stderr_ + 1e-12);
  EXPECT_NEAR(r.at("symmetry", 0.0, 2).mean, 1.0, 1e-12);
}

TEST(BuildPair, FreePresetMatchesFreeConvolution) {
  Rng rng(23);
  const ProjectionPair pair = build_pair(512, 0.2, -0.4, PairPreset::free, rng);
  const EmpiricalMoments em = empirical_moments(pair, CMatrix::Identity(512, 512), 4);
  const TraceParams p = TraceParams::from_traces(pair.alpha, pair.beta);
  const MomentSequence f = taylor_moments(HerglotzEvaluator::free_initial(p), 4);
  for (int n = 0; n < 4; ++n) EXPECT_LT(std::abs(em.symmetry[n] - f.f[n]), 5e-2);
}

TEST(MonteCarlo, BinomialIdentityHoldsPerSample) {
  EnsembleConfig c;
  c.n = 64;
  c.alpha = 0.25;
  c.beta = -0.5;
  c.n_samples = 4;
  c.t_grid = {0.0, 0.5};
  c.delta = 0.05;
  const MonteCarloResult r = monte_carlo(c);
  EXPECT_LT(r.max_binomial_defect, 1e-10);
  EXPECT_LT(r.max_imag, 1e-10);
  // A corrupted constant is noticed.
  const MonteCarloResult bad = monte_carlo(c, BinomialRelation{0.5, 0.26});
  EXPECT_GT(bad.max_binomial_defect, 1e-3);
}

TEST(MonteCarlo, DeterministicAcrossThreadCounts) {
  EnsembleConfig c;
  c.n = 16;
  c.alpha = 0.5;
  c.beta = 0.25;
  c.n_samples = 6;
  c.t_grid = {0.3, 1.0};
  c.delta = 0.05;
  c.seed = 42;
  c.threads = 1;
  const MonteCarloResult a = monte_carlo(c);
  c.threads = 3;
  const MonteCarloResult b = monte_carlo(c);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].mean, b.rows[i].mean);
    EXPECT_EQ(a.rows[i].stderr_, b.rows[i].stderr_);
  }
  c.n_samples = 1;
  EXPECT_EQ(monte_carlo(c).rows[0].mean, monte_carlo(c).rows[0].mean);
}

TEST(MonteCarlo, StandardErrorShrinksWithSamples) {
  // Pooled over moments and times: a single stderr from 10 samples is too noisy.
  EnsembleConfig c;
  c.n = 24;
  c.alpha = 0.2;
  c.beta = -0.4;
  c.t_grid = {0.5, 1.0};
  c.delta = 0.05;
  c.n_moments = 6;
  auto pooled = [&](std::size_t samples) {
    c.n_samples = samples;
    double ss = 0.0;
    for (const MonteCarloRow& row : monte_carlo(c).rows) ss += row.stderr_ * row.stderr_;
    return std::sqrt(ss);
  };
  const double ratio = pooled(10) / pooled(40);
  EXPECT_GE(ratio, 1.5);
  EXPECT_LE(ratio, 2.5);
}

TEST(EnsembleConfig, JsonAndValidation) {
  EnsembleConfig c;
  c.n = 48;
  c.preset = PairPreset::custom;
  c.angles = {0.3, 0.9};
  c.t_grid = {0.5, 2.0};
  const nlohmann::json j = c;
  const auto back = j.get<EnsembleConfig>();
  EXPECT_EQ(back.n, 48u);
  EXPECT_EQ(back.preset, PairPreset::custom);
  EXPECT_EQ(back.angles, c.angles);
  EnsembleConfig bad;
  bad.delta = 0.0;
  EXPECT_THROW(bad.validate(), ValidationError);
  EXPECT_THROW(parse_pair_preset("gaussian"), ValidationError);
}
