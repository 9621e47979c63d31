#include "liberation/bridge.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "liberation/errors.hpp"

namespace liberation {

namespace {
__extension__ typedef unsigned __int128 uint128;
}  // namespace

long double binomial(unsigned n, unsigned k) {
  if (k > n) return 0.0L;
  if (k > n - k) k = n - k;
  if (n <= 60) {
    uint128 r = 1;
    // r stays an integer at every step: r = C(n - k + i, i).
    for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return static_cast<long double>(r);
  }
  return std::exp(std::lgamma(n + 1.0L) - std::lgamma(k + 1.0L) - std::lgamma(n - k + 1.0L));
}

namespace {

// 2^{-2n} C(2n, j) computed without forming the huge binomial.
long double scaled_binomial(unsigned n, unsigned j) {
  return std::ldexp(binomial(2 * n, j), -2 * static_cast<int>(n));
}

}  // namespace

std::vector<double> project_moments(const MomentSequence& f, const TraceParams& p,
                                    std::size_t n_max, const BinomialRelation& rel) {
  if (n_max > f.f.size()) {
    std::ostringstream msg;
    msg << "project_moments: asked for " << n_max << " moments, only " << f.f.size()
        << " available";
    throw ValidationError(msg.str());
  }
  std::vector<double> m(n_max);
  for (std::size_t n = 1; n <= n_max; ++n) {
    const auto nn = static_cast<unsigned>(n);
    long double acc = rel.central * scaled_binomial(nn, nn) +
                      static_cast<long double>(rel.atom) * (p.alpha + p.beta);
    for (unsigned k = 1; k <= nn; ++k) acc += scaled_binomial(nn, nn - k) * f.f[k - 1];
    m[n - 1] = static_cast<double>(acc);
  }
  return m;
}

MomentSequence symmetry_moments(const std::vector<double>& m, const TraceParams& p,
                                const BinomialRelation& rel) {
  MomentSequence out;
  out.f.resize(m.size());
  std::vector<long double> f(m.size());
  for (std::size_t n = 1; n <= m.size(); ++n) {
    const auto nn = static_cast<unsigned>(n);
    long double rest = m[n - 1] - rel.central * scaled_binomial(nn, nn) -
                       static_cast<long double>(rel.atom) * (p.alpha + p.beta);
    for (unsigned k = 1; k < nn; ++k) rest -= scaled_binomial(nn, nn - k) * f[k - 1];
    f[n - 1] = rest / scaled_binomial(nn, 0);
    out.f[n - 1] = static_cast<double>(f[n - 1]);
  }
  return out;
}

namespace {

double checked_atom(double value, double tol, const char* name) {
  if (value < -tol) {
    std::ostringstream msg;
    msg << name << " would be " << value << " < 0: the measure is inconsistent with the traces";
    throw ValidationError(msg.str());
  }
  return value < 0.0 ? 0.0 : value;
}

}  // namespace

CircleMeasure measure_nu_from_mu(const IntervalMeasure& mu, const TraceParams& p, double tol) {
  CircleMeasure nu = interval_to_circle(mu);
  nu.atom_zero = checked_atom(2.0 * nu.atom_zero - 0.5 * (p.alpha + p.beta), tol, "atom of nu at 0");
  nu.atom_pi = checked_atom(2.0 * nu.atom_pi - 0.5 * (2.0 - p.alpha - p.beta), tol, "atom of nu at pi");
  for (double& d : nu.density) d *= 2.0;
  return nu;
}

IntervalMeasure measure_mu_from_nu(const CircleMeasure& nu, const TraceParams& p) {
  CircleMeasure hat = nu;
  hat.atom_zero = 0.5 * (nu.atom_zero + 0.5 * (p.alpha + p.beta));
  hat.atom_pi = 0.5 * (nu.atom_pi + 0.5 * (2.0 - p.alpha - p.beta));
  for (double& d : hat.density) d *= 0.5;
  return circle_to_interval(hat);
}

CircleMeasure sigma_from_nu(const CircleMeasure& nu, const TraceParams& p, double tol) {
  CircleMeasure s = nu;
  s.atom_pi = checked_atom(nu.atom_pi - p.a, tol, "atom of sigma at pi");
  s.atom_zero = checked_atom(nu.atom_zero - p.b, tol, "atom of sigma at 0");
  return s;
}

CircleMeasure sigma_from_mu(const IntervalMeasure& mu, const TraceParams& p, double tol) {
  CircleMeasure s = interval_to_circle(mu);
  const double tp = p.tau_p(), tq = p.tau_q();
  s.atom_pi = checked_atom(2.0 * (s.atom_pi - (1.0 - std::min(tp, tq))), tol, "atom of sigma at pi");
  s.atom_zero = checked_atom(2.0 * (s.atom_zero - std::max(tp + tq - 1.0, 0.0)), tol,
                             "atom of sigma at 0");
  for (double& d : s.density) d *= 2.0;
  return s;
}

double stationary_projection_density(const TraceParams& p, double x) {
  if (!(x > 0.0 && x < 1.0)) return 0.0;
  // 2x - 1 + r, written to avoid cancellation at either end of [0, 1].
  auto shifted = [x](double r) { return x < 0.5 ? 2.0 * x - (1.0 - r) : (1.0 + r) - 2.0 * (1.0 - x); };
  const double rad = -shifted(p.r_plus) * shifted(p.r_minus);
  if (!(rad > 0.0)) return 0.0;
  return std::sqrt(rad) / (4.0 * std::numbers::pi * x * (1.0 - x));
}

}  // namespace liberation
