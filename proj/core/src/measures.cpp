#include "liberation/measures.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "liberation/errors.hpp"
#include "liberation/quadrature.hpp"

namespace liberation {

namespace {

constexpr double kPi = std::numbers::pi;

double weighted_sum(const std::vector<double>& w, const std::vector<double>& d) {
  double s = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) s += w[j] * d[j];
  return s;
}

void check_samples(const char* what, const std::vector<double>& grid,
                   const std::vector<double>& density, const std::vector<double>& weights,
                   double lo, double hi) {
  std::ostringstream msg;
  if (grid.size() != density.size() || grid.size() != weights.size()) {
    msg << what << ": grid, density and weights must have equal length";
    throw ValidationError(msg.str());
  }
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (!(grid[j] >= lo && grid[j] <= hi) || (j > 0 && !(grid[j] > grid[j - 1]))) {
      msg << what << ": grid must be strictly increasing inside [" << lo << ", " << hi
          << "], bad node at index " << j;
      throw ValidationError(msg.str());
    }
    if (!(density[j] >= 0.0) || !std::isfinite(density[j])) {
      msg << what << ": density must be finite and nonnegative, index " << j;
      throw ValidationError(msg.str());
    }
    if (!(weights[j] >= 0.0)) {
      msg << what << ": quadrature weight negative at index " << j;
      throw ValidationError(msg.str());
    }
  }
}

}  // namespace

double CircleMeasure::continuous_mass() const { return 2.0 * weighted_sum(weights, density); }

void CircleMeasure::validate(double mass_tol) const {
  check_samples("CircleMeasure", grid, density, weights, 0.0, kPi);
  if (!(atom_zero >= 0.0) || !(atom_pi >= 0.0)) {
    throw ValidationError("CircleMeasure: atoms must be nonnegative");
  }
  const double mass = total_mass();
  if (std::abs(mass - 1.0) > mass_tol) {
    std::ostringstream msg;
    msg << "CircleMeasure: total mass " << std::setprecision(12) << mass << " differs from 1";
    throw ValidationError(msg.str());
  }
}

double IntervalMeasure::continuous_mass() const { return weighted_sum(weights, density); }

void IntervalMeasure::validate(double mass_tol) const {
  check_samples("IntervalMeasure", grid, density, weights, 0.0, 1.0);
  if (!(atom_zero >= 0.0) || !(atom_one >= 0.0)) {
    throw ValidationError("IntervalMeasure: atoms must be nonnegative");
  }
  const double mass = total_mass();
  if (std::abs(mass - 1.0) > mass_tol) {
    std::ostringstream msg;
    msg << "IntervalMeasure: total mass " << std::setprecision(12) << mass << " differs from 1";
    throw ValidationError(msg.str());
  }
}

std::vector<double> IntervalMeasure::moments(std::size_t n_max) const {
  std::vector<double> m(n_max, atom_one);
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid[j];
    const double wd = weights[j] * density[j];
    double xn = 1.0;
    for (std::size_t n = 0; n < n_max; ++n) {
      xn *= x;
      m[n] += wd * xn;
    }
  }
  return m;
}

CircleMeasure bernoulli_symmetry_law(double alpha) {
  if (!(alpha >= -1.0 && alpha <= 1.0)) {
    throw ValidationError("bernoulli_symmetry_law: alpha must lie in [-1, 1]");
  }
  CircleMeasure m;
  m.atom_zero = (1.0 + alpha) / 2.0;
  m.atom_pi = (1.0 - alpha) / 2.0;
  return m;
}

CircleMeasure uniform_circle_measure(std::size_t points) {
  auto rule = midpoint_rule(0.0, kPi, points);
  CircleMeasure m;
  m.grid = std::move(rule.nodes);
  m.weights = std::move(rule.weights);
  m.density.assign(m.grid.size(), 1.0 / (2.0 * kPi));
  return m;
}

MomentSequence moments_from_measure(const CircleMeasure& m, std::size_t n_max) {
  if (n_max == 0) throw ValidationError("moments_from_measure: n_max must be >= 1");
  MomentSequence out;
  out.f.resize(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) {
    out.f[n - 1] = m.atom_zero + (n % 2 == 0 ? m.atom_pi : -m.atom_pi);
  }
  for (std::size_t j = 0; j < m.grid.size(); ++j) {
    const double wd = 2.0 * m.weights[j] * m.density[j];
    if (wd == 0.0) continue;
    // cos(n theta) by the Chebyshev recurrence.
    const double c1 = std::cos(m.grid[j]);
    double prev = 1.0;
    double cur = c1;
    for (std::size_t n = 1; n <= n_max; ++n) {
      out.f[n - 1] += wd * cur;
      const double next = 2.0 * c1 * cur - prev;
      prev = cur;
      cur = next;
    }
  }
  return out;
}

CircleMeasure interval_to_circle(const IntervalMeasure& m) {
  CircleMeasure c;
  c.atom_zero = m.atom_one;
  c.atom_pi = m.atom_zero;
  const std::size_t n = m.grid.size();
  c.grid.resize(n);
  c.density.resize(n);
  c.weights.resize(n);
  // x increasing maps to theta decreasing; fill from the back.
  for (std::size_t j = 0; j < n; ++j) {
    const double x = m.grid[j];
    const double theta = 2.0 * std::acos(std::sqrt(x));
    const double s = std::sin(theta);
    const std::size_t k = n - 1 - j;
    c.grid[k] = theta;
    c.density[k] = m.density[j] * std::abs(s) / 4.0;
    // dx = sin(theta)/2 d(theta)
    c.weights[k] = s > 0.0 ? 2.0 * m.weights[j] / s : 0.0;
  }
  return c;
}

IntervalMeasure circle_to_interval(const CircleMeasure& c) {
  IntervalMeasure m;
  m.atom_one = c.atom_zero;
  m.atom_zero = c.atom_pi;
  const std::size_t n = c.grid.size();
  m.grid.resize(n);
  m.density.resize(n);
  m.weights.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double theta = c.grid[k];
    const double s = std::sin(theta);
    const double half_cos = std::cos(theta / 2.0);
    const std::size_t j = n - 1 - k;
    m.grid[j] = half_cos * half_cos;
    m.density[j] = s > 0.0 ? 4.0 * c.density[k] / s : 0.0;
    m.weights[j] = c.weights[k] * s / 2.0;
  }
  return m;
}

void to_json(nlohmann::json& j, const CircleMeasure& m) {
  j = nlohmann::json{{"atom_zero", m.atom_zero}, {"atom_pi", m.atom_pi}, {"grid", m.grid},
                     {"density", m.density},     {"weights", m.weights}};
}

void from_json(const nlohmann::json& j, CircleMeasure& m) {
  m.atom_zero = j.value("atom_zero", 0.0);
  m.atom_pi = j.value("atom_pi", 0.0);
  m.grid = j.value("grid", std::vector<double>{});
  m.density = j.value("density", std::vector<double>{});
  if (j.contains("weights")) {
    m.weights = j.at("weights").get<std::vector<double>>();
  } else {
    m.weights = cell_weights(m.grid, 0.0, kPi);
  }
}

void to_json(nlohmann::json& j, const IntervalMeasure& m) {
  j = nlohmann::json{{"atom_zero", m.atom_zero}, {"atom_one", m.atom_one}, {"grid", m.grid},
                     {"density", m.density},     {"weights", m.weights}};
}

void from_json(const nlohmann::json& j, IntervalMeasure& m) {
  m.atom_zero = j.value("atom_zero", 0.0);
  m.atom_one = j.value("atom_one", 0.0);
  m.grid = j.value("grid", std::vector<double>{});
  m.density = j.value("density", std::vector<double>{});
  if (j.contains("weights")) {
    m.weights = j.at("weights").get<std::vector<double>>();
  } else {
    m.weights = cell_weights(m.grid, 0.0, 1.0);
  }
}

void write_density_csv(std::ostream& os, const CircleMeasure& m) {
  os << "theta,density\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t j = 0; j < m.grid.size(); ++j) os << m.grid[j] << ',' << m.density[j] << '\n';
}

void write_density_csv(std::ostream& os, const IntervalMeasure& m) {
  os << "x,density\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t j = 0; j < m.grid.size(); ++j) os << m.grid[j] << ',' << m.density[j] << '\n';
}

}  // namespace liberation
