#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "liberation/bridge.hpp"
#include "liberation/params.hpp"

namespace liberation {

using CMatrix = Eigen::MatrixXcd;
using Rng = std::mt19937_64;

/// Initial relative position of the two projections.
enum class PairPreset {
  free,       // P diagonal, Q rotated by a Haar unitary
  equal,      // Q = P
  classical,  // P and Q diagonal with independently shuffled entries
  custom,     // 2x2 blocks at prescribed principal angles plus a diagonal tail
};
PairPreset parse_pair_preset(const std::string& name);
std::string to_string(PairPreset preset);

/// Seed of the i-th independent stream, by splitmix64 hashing of (seed, i).
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index);

/// Hermitian matrix with E (1/N) tr G^2 = 1: real N(0, 1/N) diagonal,
/// complex off-diagonal entries with E|G_ij|^2 = 1/N.
CMatrix gue_increment(std::size_t n, Rng& rng);

/// exp(i sqrt(delta) G) through the (2,2) Pade approximant, which is
/// exactly unitary for Hermitian G.
CMatrix unitary_increment(const CMatrix& g, double delta);

/// ||U* U - I|| in the max-entry norm.
double unitarity_defect(const CMatrix& u);

/// Brownian motion on U(N) by the multiplicative scheme U <- U exp(i sqrt(dt) G).
/// Re-orthonormalises by a Newton-Schulz polar step every `reorth_every` steps.
class UnitaryBrownianMotion {
 public:
  UnitaryBrownianMotion(std::size_t n, double delta, std::size_t reorth_every = 100);
  /// Advances to time t >= current time. The last step is shortened if t
  /// is not a multiple of delta.
  void advance_to(double t, Rng& rng);
  const CMatrix& matrix() const noexcept { return u_; }
  double time() const noexcept { return t_; }
  std::size_t steps() const noexcept { return steps_; }

 private:
  void step(double dt, Rng& rng);
  CMatrix u_;
  double delta_;
  double t_ = 0.0;
  std::size_t reorth_every_;
  std::size_t steps_ = 0;
};

CMatrix evolve_unitary(std::size_t n, double t, double delta, Rng& rng);

/// Haar-distributed unitary (QR of a complex Ginibre matrix with phase fix).
CMatrix haar_unitary(std::size_t n, Rng& rng);

struct ProjectionPair {
  CMatrix P, Q, R, S;
  double alpha = 0.0;  // achieved tr(R)/N
  double beta = 0.0;   // achieved tr(S)/N
};

/// Number of ones needed for a trace as close to `target` as N allows.
std::size_t achieved_rank(std::size_t n, double target);

/// Builds P, Q and R = 2P - I, S = 2Q - I. `angles` are the principal angles
/// of the custom preset. Throws ValidationError if the traces are not
/// reachable with the requested structure.
ProjectionPair build_pair(std::size_t n, double alpha, double beta, PairPreset preset, Rng& rng,
                          const std::vector<double>& angles = {});

struct EmpiricalMoments {
  std::vector<double> symmetry;    // (1/N) tr (R U S U*)^n
  std::vector<double> projection;  // (1/N) tr (P U Q U*)^n
  double max_imag = 0.0;
};
/// Moments by repeated multiplication. Throws NumericalHealthError if an
/// imaginary part exceeds 1e-8.
EmpiricalMoments empirical_moments(const ProjectionPair& pair, const CMatrix& u,
                                   std::size_t n_max);

struct EnsembleConfig {
  std::size_t n = 256;
  double delta = 0.01;
  double alpha = 0.0;
  double beta = 0.0;
  PairPreset preset = PairPreset::free;
  std::vector<double> angles;
  std::uint64_t seed = 1;
  std::size_t n_samples = 40;
  std::size_t n_moments = 6;
  std::vector<double> t_grid{1.0};
  std::size_t threads = 0;  // 0: hardware concurrency
  std::size_t reorth_every = 100;

  void validate() const;
};
void to_json(nlohmann::json& j, const EnsembleConfig& c);
void from_json(const nlohmann::json& j, EnsembleConfig& c);

struct MonteCarloRow {
  std::string process;  // "symmetry" or "projection"
  double t;
  std::size_t n;
  double mean;
  double stderr_;
  std::size_t n_samples;
  std::size_t dim;
};

struct MonteCarloResult {
  std::vector<MonteCarloRow> rows;
  double alpha = 0.0;  // achieved
  double beta = 0.0;
  /// Largest per-sample deviation from the binomial moment relation,
  /// evaluated with the achieved traces.
  double max_binomial_defect = 0.0;
  double max_unitarity_defect = 0.0;
  double max_symmetry_defect = 0.0;  // max ||R^2 - I||, ||S^2 - I||
  double max_imag = 0.0;
  double seconds = 0.0;

  const MonteCarloRow& at(const std::string& process, double t, std::size_t n) const;
};

/// Independent samples, one RNG stream per sample index; aggregation runs in
/// index order, so the result does not depend on the thread count.
/// `relation` is the binomial relation the per-sample check uses.
MonteCarloResult monte_carlo(const EnsembleConfig& config, const BinomialRelation& relation = {});

/// CSV with header process,t,n,mean,stderr,n_samples,N.
void write_monte_carlo_csv(std::ostream& os, const MonteCarloResult& result);

}  // namespace liberation
