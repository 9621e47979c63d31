#include <cmath>
#include <numbers>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "liberation/errors.hpp"
#include "liberation/measures.hpp"
#include "liberation/params.hpp"
#include "liberation/quadrature.hpp"
#include "liberation/series.hpp"

using namespace liberation;

namespace {
constexpr double kPi = std::numbers::pi;

// Interval density h on a midpoint grid of [0, 1].
IntervalMeasure interval_density(double (*h)(double), std::size_t n) {
  const QuadratureRule rule = midpoint_rule(0.0, 1.0, n);
  IntervalMeasure m;
  m.grid = rule.nodes;
  m.weights = rule.weights;
  for (double x : rule.nodes) m.density.push_back(h(x));
  return m;
}
}  // namespace

TEST(TraceParams, DerivedConstants) {
  const TraceParams p = TraceParams::from_traces(0.2, -0.4);
  EXPECT_DOUBLE_EQ(p.a, 0.3);
  EXPECT_NEAR(p.b, 0.1, 1e-16);
  const double spread = std::sqrt((1 - 0.04) * (1 - 0.16));
  EXPECT_NEAR(p.r_plus, -0.08 + spread, 1e-15);
  EXPECT_NEAR(p.r_minus, -0.08 - spread, 1e-15);
  EXPECT_NEAR(p.tau_p(), 0.6, 1e-15);
  EXPECT_DOUBLE_EQ(p.max_square(), 0.16);
}

TEST(TraceParams, RejectsOutOfRange) {
  EXPECT_THROW(TraceParams::from_traces(1.5, 0.0), ValidationError);
  EXPECT_THROW(TraceParams::from_traces(0.0, std::nan("")), ValidationError);
  EXPECT_THROW(TraceParams::from_projection_traces(-0.1, 0.5), ValidationError);
}

TEST(Quadrature, GaussLegendreIsExactForPolynomials) {
  const QuadratureRule g = gauss_legendre(0.0, 2.0, 6);
  double s = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) s += g.weights[i] * std::pow(g.nodes[i], 11);
  EXPECT_NEAR(s, std::pow(2.0, 12) / 12.0, 1e-11);
}

TEST(Quadrature, CellWeightsReproduceMidpoint) {
  const QuadratureRule m = midpoint_rule(0.0, kPi, 17);
  const std::vector<double> w = cell_weights(m.nodes, 0.0, kPi);
  for (std::size_t i = 0; i < w.size(); ++i) EXPECT_NEAR(w[i], m.weights[i], 1e-15);
}

TEST(BernoulliLaw, Examples) {
  const CircleMeasure one = bernoulli_symmetry_law(1.0);
  EXPECT_DOUBLE_EQ(one.atom_zero, 1.0);
  EXPECT_DOUBLE_EQ(one.atom_pi, 0.0);
  const CircleMeasure half = bernoulli_symmetry_law(0.0);
  EXPECT_DOUBLE_EQ(half.atom_zero, 0.5);
  EXPECT_DOUBLE_EQ(half.atom_pi, 0.5);
  const CircleMeasure m = bernoulli_symmetry_law(0.5);
  EXPECT_DOUBLE_EQ(m.atom_zero, 0.75);
  EXPECT_DOUBLE_EQ(m.atom_pi, 0.25);
  EXPECT_NO_THROW(m.validate());
}

TEST(MomentsFromMeasure, Examples) {
  const MomentSequence point = moments_from_measure(bernoulli_symmetry_law(1.0), 8);
  for (double f : point.f) EXPECT_DOUBLE_EQ(f, 1.0);

  const MomentSequence half = moments_from_measure(bernoulli_symmetry_law(0.0), 8);
  for (std::size_t n = 1; n <= 8; ++n) EXPECT_DOUBLE_EQ(half.moment(n), n % 2 == 0 ? 1.0 : 0.0);

  const CircleMeasure uniform = uniform_circle_measure(256);
  EXPECT_NO_THROW(uniform.validate(1e-12));
  for (double f : moments_from_measure(uniform, 12).f) EXPECT_NEAR(f, 0.0, 1e-14);
}

TEST(IntervalToCircle, AtomsSwapEnds) {
  IntervalMeasure at_zero;
  at_zero.atom_zero = 1.0;
  const CircleMeasure c0 = interval_to_circle(at_zero);
  EXPECT_DOUBLE_EQ(c0.atom_pi, 1.0);
  EXPECT_DOUBLE_EQ(c0.atom_zero, 0.0);

  IntervalMeasure at_one;
  at_one.atom_one = 1.0;
  const CircleMeasure c1 = interval_to_circle(at_one);
  EXPECT_DOUBLE_EQ(c1.atom_zero, 1.0);
  EXPECT_DOUBLE_EQ(c1.atom_pi, 0.0);
}

TEST(IntervalToCircle, UniformDensityBecomesHalfSine) {
  const IntervalMeasure flat = interval_density([](double) { return 1.0; }, 400);
  const CircleMeasure c = interval_to_circle(flat);
  for (std::size_t j = 0; j < c.grid.size(); j += 37) {
    EXPECT_NEAR(c.density[j], std::abs(std::sin(c.grid[j])) / 4.0, 1e-14);
  }
  // 2 * int_0^pi sin/4 = 1.
  EXPECT_NEAR(c.total_mass(), 1.0, 1e-5);
  const IntervalMeasure back = circle_to_interval(c);
  for (std::size_t j = 0; j < back.grid.size(); j += 41) EXPECT_NEAR(back.density[j], 1.0, 1e-10);
}

TEST(CircleMeasure, ValidateRejectsBadInput) {
  CircleMeasure m = uniform_circle_measure(32);
  m.density[3] = -1e-3;
  EXPECT_THROW(m.validate(), ValidationError);
  CircleMeasure heavy = bernoulli_symmetry_law(0.2);
  heavy.atom_zero += 0.1;
  EXPECT_THROW(heavy.validate(), ValidationError);
  CircleMeasure ragged = uniform_circle_measure(8);
  ragged.weights.pop_back();
  EXPECT_THROW(ragged.validate(), ValidationError);
}

TEST(CircleMeasure, JsonRoundTrip) {
  CircleMeasure m = uniform_circle_measure(16);
  m.atom_zero = 0.25;
  m.atom_pi = 0.25;
  for (double& d : m.density) d *= 0.5;
  const nlohmann::json j = m;
  const auto back = j.get<CircleMeasure>();
  EXPECT_EQ(back.grid, m.grid);
  EXPECT_EQ(back.density, m.density);
  EXPECT_DOUBLE_EQ(back.atom_pi, 0.25);

  // Weights are optional on input.
  nlohmann::json bare = j;
  bare.erase("weights");
  const auto rebuilt = bare.get<CircleMeasure>();
  EXPECT_NEAR(rebuilt.total_mass(), 1.0, 1e-12);
}

TEST(Series, SqrtSquaresBack) {
  const Series a{4.0, 1.0, -2.0, 0.5, 3.0};
  const Series s = series_sqrt(a, 5);
  const Series sq = series_mul(s, s, 5);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_NEAR(sq[i], a[i], 1e-14);
  const Series g = even_geometric(6);
  EXPECT_EQ(g, (Series{1, 0, 1, 0, 1, 0}));
  const SeriesValue v = series_eval(g, 0.5);
  EXPECT_NEAR(v.value.real(), 1 + 0.25 + 0.0625, 1e-15);
}
