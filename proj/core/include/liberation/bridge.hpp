#pragma once

#include <cstddef>
#include <vector>

#include "liberation/measures.hpp"
#include "liberation/params.hpp"

namespace liberation {

/// C(n, k): exact in 128-bit integers for n <= 60, through lgamma beyond.
long double binomial(unsigned n, unsigned k);

/// Coefficients of the relation between the two moment sequences,
///   m_n = central * 2^{-2n} C(2n, n) + atom * (alpha + beta)
///         + 2^{-2n} sum_{k=1}^{n} C(2n, n-k) f_k.
/// Only a fault-injection test should change the defaults.
struct BinomialRelation {
  double central = 0.5;
  double atom = 0.25;
};

/// Moments tau[(P U Q U*)^n], n = 1..n_max, of the projection process.
std::vector<double> project_moments(const MomentSequence& f, const TraceParams& p,
                                    std::size_t n_max, const BinomialRelation& rel = {});

/// Inverse of project_moments by forward substitution (the map is
/// triangular with diagonal 2^{-2n}). Errors grow like 4^n.
MomentSequence symmetry_moments(const std::vector<double>& m, const TraceParams& p,
                                const BinomialRelation& rel = {});

/// nu = 2 mu_hat - (2 - alpha - beta)/2 delta_pi - (alpha + beta)/2 delta_0,
/// mu_hat being the symmetrised pushforward of mu under x = cos^2(theta/2).
/// An atom that would come out below -tol throws ValidationError naming it.
CircleMeasure measure_nu_from_mu(const IntervalMeasure& mu, const TraceParams& p,
                                 double tol = 1e-12);

/// Inverse of measure_nu_from_mu.
IntervalMeasure measure_mu_from_nu(const CircleMeasure& nu, const TraceParams& p);

/// sigma = nu - a delta_pi - b delta_0, total mass 1 - a - b.
CircleMeasure sigma_from_nu(const CircleMeasure& nu, const TraceParams& p, double tol = 1e-12);

/// The same measure from projection data:
/// 2 [mu_hat - (1 - min(tau(P), tau(Q))) delta_pi - max(tau(P) + tau(Q) - 1, 0) delta_0].
CircleMeasure sigma_from_mu(const IntervalMeasure& mu, const TraceParams& p, double tol = 1e-12);

/// Density of the absolutely continuous part of mu_infinity on [0, 1]:
///   sqrt(-(2x - 1 + r_+)(2x - 1 + r_-)) / (4 pi x (1 - x)).
double stationary_projection_density(const TraceParams& p, double x);

}  // namespace liberation
