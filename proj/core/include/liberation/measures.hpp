#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace liberation {

/// Truncated moment vector f_1..f_N of a symmetric law on the circle at time t.
/// f[0] holds f_1.
struct MomentSequence {
  double t = 0.0;
  std::vector<double> f;

  std::size_t order() const noexcept { return f.size(); }
  /// 1-based access: moment(1) == f[0].
  double moment(std::size_t n) const { return f.at(n - 1); }
};

/// Probability measure on the unit circle, invariant under theta -> -theta.
///
/// Atoms can only sit at angle 0 (zeta = 1) and angle pi (zeta = -1). The
/// continuous part is stored on (0, pi) as density samples w.r.t. d(theta);
/// the mirror half (-pi, 0) is implied. `weights` is the quadrature rule the
/// samples were produced for, so that sum_j weights[j] * g(grid[j]) * density[j]
/// integrates g against the continuous part on (0, pi).
struct CircleMeasure {
  double atom_zero = 0.0;
  double atom_pi = 0.0;
  std::vector<double> grid;
  std::vector<double> density;
  std::vector<double> weights;

  /// Mass of the continuous part over the whole circle (both halves).
  double continuous_mass() const;
  double total_mass() const { return atom_zero + atom_pi + continuous_mass(); }

  /// Throws ValidationError if shapes disagree, the grid is not strictly
  /// increasing inside [0, pi], anything is negative, or the total mass is
  /// off by more than mass_tol.
  void validate(double mass_tol = 1e-6) const;
};

/// Measure on [0, 1]: atoms at x = 0 and x = 1 plus density samples w.r.t. dx.
struct IntervalMeasure {
  double atom_zero = 0.0;
  double atom_one = 0.0;
  std::vector<double> grid;
  std::vector<double> density;
  std::vector<double> weights;

  double continuous_mass() const;
  double total_mass() const { return atom_zero + atom_one + continuous_mass(); }
  void validate(double mass_tol = 1e-6) const;
  /// m_n = int x^n dmu for n = 1..n_max.
  std::vector<double> moments(std::size_t n_max) const;
};

/// Law of a symmetry with trace alpha: (1+alpha)/2 at angle 0, (1-alpha)/2 at pi.
CircleMeasure bernoulli_symmetry_law(double alpha);

/// Uniform probability measure on the circle sampled on a midpoint grid.
CircleMeasure uniform_circle_measure(std::size_t points);

/// f_n = atom_zero + (-1)^n atom_pi + 2 * int_0^pi cos(n theta) density.
MomentSequence moments_from_measure(const CircleMeasure& m, std::size_t n_max);

/// Pushes mu forward through x = cos^2(theta/2) and symmetrizes. The atom at
/// x = 1 lands at angle 0, the atom at x = 0 at angle pi, and the density
/// becomes h(cos^2(theta/2)) |sin theta| / 4.
CircleMeasure interval_to_circle(const IntervalMeasure& m);

/// Inverse of interval_to_circle on measures it can produce.
IntervalMeasure circle_to_interval(const CircleMeasure& m);

// Serialization. JSON layout:
//   {"atom_zero":..., "atom_pi":..., "grid":[...], "density":[...], "weights":[...]}
// ("atom_one" instead of "atom_pi" for interval measures). "weights" is
// optional on input; when absent, cell_weights() over the support is used.
void to_json(nlohmann::json& j, const CircleMeasure& m);
void from_json(const nlohmann::json& j, CircleMeasure& m);
void to_json(nlohmann::json& j, const IntervalMeasure& m);
void from_json(const nlohmann::json& j, IntervalMeasure& m);

/// CSV with header `theta,density`.
void write_density_csv(std::ostream& os, const CircleMeasure& m);
/// CSV with header `x,density`.
void write_density_csv(std::ostream& os, const IntervalMeasure& m);

}  // namespace liberation
