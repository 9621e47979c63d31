#include "liberation/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <utility>

#include "liberation/errors.hpp"
#include "real_math.hpp"

namespace liberation {

namespace {

constexpr double kPi = std::numbers::pi;

void require_disk(cplx z, const char* who) {
  if (!(std::abs(z) < 1.0)) {
    std::ostringstream msg;
    msg << who << ": |z| must be < 1, got " << std::abs(z);
    throw DomainError(msg.str());
  }
}

// Root of s^2 = q with positive real part after division by `den`, i.e.
// the sign that makes s/den a Herglotz value.
cplx herglotz_root(cplx q, cplx den) {
  cplx s = std::sqrt(q);
  if ((s / den).real() < 0.0) s = -s;
  return s;
}

// (alpha beta z (1+z)^2 + (alpha-beta)^2 z^2) / (1-z^2)^2 and its derivative.
struct FreeRatio {
  cplx value;
  cplx d1;
};
FreeRatio free_ratio(cplx z, const TraceParams& p) {
  const double ab = p.alpha * p.beta;
  const double dd = (p.alpha - p.beta) * (p.alpha - p.beta);
  const cplx one_m = 1.0 - z * z;
  const cplx num = ab * z * (1.0 + z) * (1.0 + z) + dd * z * z;
  const cplx dnum = ab * (1.0 + z) * (1.0 + 3.0 * z) + 2.0 * dd * z;
  const cplx den = one_m * one_m;
  const cplx dden = -4.0 * z * one_m;
  return {num / den, (dnum * den - num * dden) / (den * den)};
}

// Quartic under the root of the stationary transform.
cplx stationary_quartic(cplx z, const TraceParams& p, cplx* derivative) {
  const double ab = p.alpha * p.beta;
  const double dd = (p.alpha - p.beta) * (p.alpha - p.beta);
  const double q0 = 1.0, q1 = 4.0 * ab, q2 = -2.0 + 8.0 * ab + 4.0 * dd, q3 = 4.0 * ab, q4 = 1.0;
  if (derivative) *derivative = q1 + z * (2.0 * q2 + z * (3.0 * q3 + z * 4.0 * q4));
  return q0 + z * (q1 + z * (q2 + z * (q3 + z * q4)));
}

}  // namespace

// ---------------------------------------------------------------- evaluator

HerglotzEvaluator HerglotzEvaluator::from_moments(const MomentSequence& m, const TraceParams& p,
                                                  double r_max) {
  if (m.f.empty()) throw ValidationError("HerglotzEvaluator: empty moment sequence");
  if (!(r_max > 0.0 && r_max < 1.0)) throw ValidationError("HerglotzEvaluator: r_max in (0, 1)");
  HerglotzEvaluator h;
  h.kind_ = Kind::series;
  h.p_ = p;
  h.r_max_ = r_max;
  h.coeffs_.resize(m.f.size() + 1);
  h.coeffs_[0] = 1.0;
  for (std::size_t n = 0; n < m.f.size(); ++n) h.coeffs_[n + 1] = 2.0 * m.f[n];
  return h;
}

HerglotzEvaluator HerglotzEvaluator::stationary(const TraceParams& p) {
  HerglotzEvaluator h;
  h.kind_ = Kind::stationary;
  h.p_ = p;
  return h;
}

HerglotzEvaluator HerglotzEvaluator::classical_independent(const TraceParams& p) {
  HerglotzEvaluator h;
  h.kind_ = Kind::classical_independent;
  h.p_ = p;
  return h;
}

HerglotzEvaluator HerglotzEvaluator::point_mass_zero(const TraceParams& p) {
  if (std::abs(p.alpha - p.beta) > 1e-15) {
    throw ValidationError("point-mass initial data needs alpha == beta");
  }
  HerglotzEvaluator h;
  h.kind_ = Kind::point_mass_zero;
  h.p_ = p;
  return h;
}

HerglotzEvaluator HerglotzEvaluator::free_initial(const TraceParams& p) {
  HerglotzEvaluator h;
  h.kind_ = Kind::free_initial;
  h.p_ = p;
  // With a centred factor the S-transform does not exist; the closed form
  // of the convolution is used instead.
  if (p.alpha * p.beta != 0.0) h.pipeline_ = std::make_shared<FreeConvolutionPipeline>(p);
  return h;
}

HerglotzEvaluator HerglotzEvaluator::initial(InitialData kind, const TraceParams& p) {
  switch (kind) {
    case InitialData::free: return free_initial(p);
    case InitialData::classical: return classical_independent(p);
    case InitialData::equal: return point_mass_zero(p);
  }
  throw ValidationError("unknown initial data");
}

cplx HerglotzEvaluator::operator()(cplx z) const {
  require_disk(z, "herglotz_eval");
  switch (kind_) {
    case Kind::series: {
      if (std::abs(z) > r_max_ + 1e-15) {
        std::ostringstream msg;
        msg << "herglotz_eval: |z| = " << std::abs(z) << " beyond series radius " << r_max_;
        throw DomainError(msg.str());
      }
      return series_eval(coeffs_, z).value;
    }
    case Kind::stationary: {
      const cplx den = 1.0 - z * z;
      return herglotz_root(stationary_quartic(z, p_, nullptr), den) / den;
    }
    case Kind::classical_independent:
      return (1.0 + 2.0 * p_.alpha * p_.beta * z + z * z) / (1.0 - z * z);
    case Kind::point_mass_zero:
      return (1.0 + z) / (1.0 - z);
    case Kind::free_initial: {
      if (pipeline_) return pipeline_->herglotz(z);
      return herglotz_root(1.0 + 4.0 * free_ratio(z, p_).value, 1.0);
    }
  }
  return {};
}

cplx HerglotzEvaluator::derivative(cplx z) const {
  require_disk(z, "herglotz_derivative");
  switch (kind_) {
    case Kind::series:
      if (std::abs(z) > r_max_ + 1e-15) throw DomainError("herglotz_derivative: beyond series radius");
      return series_eval(coeffs_, z).d1;
    case Kind::stationary: {
      const cplx den = 1.0 - z * z;
      cplx dq;
      const cplx q = stationary_quartic(z, p_, &dq);
      const cplx s = herglotz_root(q, den);
      return dq / (2.0 * s) / den + 2.0 * z * s / (den * den);
    }
    case Kind::classical_independent: {
      const double ab = p_.alpha * p_.beta;
      const cplx den = 1.0 - z * z;
      return ((2.0 * ab + 2.0 * z) * den + 2.0 * z * (1.0 + 2.0 * ab * z + z * z)) / (den * den);
    }
    case Kind::point_mass_zero:
      return 2.0 / ((1.0 - z) * (1.0 - z));
    case Kind::free_initial: {
      if (pipeline_) return 2.0 * pipeline_->psi_product_derivative(z);
      const FreeRatio r = free_ratio(z, p_);
      return 2.0 * r.d1 / herglotz_root(1.0 + 4.0 * r.value, 1.0);
    }
  }
  return {};
}

double HerglotzEvaluator::tail_bound(double r) const {
  if (kind_ != Kind::series) return 0.0;
  const double n = static_cast<double>(coeffs_.size() - 1);
  return 2.0 * std::pow(r, n + 1.0) / (1.0 - r);
}

// ----------------------------------------------------------------- pipeline

FreeConvolutionPipeline::FreeConvolutionPipeline(const TraceParams& p, std::size_t ray_steps)
    : p_(p), ray_steps_(std::max<std::size_t>(ray_steps, 1)) {
  if (p.alpha * p.beta == 0.0) {
    throw ValidationError("FreeConvolutionPipeline: both traces must be nonzero");
  }
  for (double mean : {p.alpha, p.beta}) {
    const cplx s0 = s_single(1e-9, mean);
    if (std::abs(s0 - 1.0 / mean) > 1e-6 * std::abs(1.0 / mean)) {
      throw NumericalHealthError("FreeConvolutionPipeline: S(0+) != 1/mean on the chosen branch");
    }
    // psi_single has a critical point at (sqrt(1 - mean^2) - 1)/mean, so chi
    // inverts it only on a smaller disk; probe at half that radius.
    const double r = 0.5 * (1.0 - std::sqrt(1.0 - mean * mean)) / std::abs(mean);
    for (cplx u : {cplx(1.0, 0.0), cplx(0.0, 1.0), cplx(-0.6, 0.6), cplx(0.8, -0.3)}) {
      const cplx z = r * u;
      if (std::abs(chi_single(psi_single(z, mean), mean) - z) > 1e-10) {
        throw NumericalHealthError("FreeConvolutionPipeline: chi(psi(z)) != z on the chosen branch");
      }
    }
  }
}

cplx FreeConvolutionPipeline::psi_single(cplx z, double mean) const {
  return z * (z + mean) / (1.0 - z * z);
}

cplx FreeConvolutionPipeline::branch(cplx w, double mean, cplx previous) {
  const cplx s = mean * std::sqrt(1.0 + 4.0 * w * (w + 1.0) / (mean * mean));
  return std::abs(s - previous) <= std::abs(s + previous) ? s : -s;
}

namespace {

// One factor S(w) = 2(w+1)/(mean + s), s^2 = mean^2 + 4w(w+1). Where
// mean + s is the smaller of mean +- s the equivalent (s - mean)/(2w) is
// used, carried as ws = w S to keep w = 0 regular on that sheet.
struct SFactor {
  bool reduced;
  cplx s, ds;    // S and S' (not reduced)
  cplx ws, dws;  // w S and its derivative (reduced)
};

SFactor s_factor(cplx w, double mean, cplx root) {
  const cplx droot = 2.0 * (2.0 * w + 1.0) / root;
  SFactor f{};
  if (std::abs(mean + root) >= std::abs(mean - root)) {
    f.reduced = false;
    f.s = 2.0 * (w + 1.0) / (mean + root);
    f.ds = 2.0 / (mean + root) - 2.0 * (w + 1.0) * droot / ((mean + root) * (mean + root));
  } else {
    f.reduced = true;
    f.ws = 0.5 * (root - mean);
    f.dws = 0.5 * droot;
  }
  return f;
}

// chi = w/(1+w) S_a S_b and its derivative, for any mix of factor forms.
std::pair<cplx, cplx> chi_and_derivative(cplx w, const SFactor& fa, const SFactor& fb) {
  const cplx one = 1.0 + w;
  if (!fa.reduced && !fb.reduced) {
    const cplx g = w / one, dg = 1.0 / (one * one);
    return {g * fa.s * fb.s, dg * fa.s * fb.s + g * (fa.ds * fb.s + fa.s * fb.ds)};
  }
  if (fa.reduced && fb.reduced) {
    const cplx q = w * one;
    const cplx num = fa.ws * fb.ws;
    return {num / q, (fa.dws * fb.ws + fa.ws * fb.dws) / q - num * (1.0 + 2.0 * w) / (q * q)};
  }
  const SFactor& r = fa.reduced ? fa : fb;
  const SFactor& n = fa.reduced ? fb : fa;
  return {r.ws * n.s / one, (r.dws * n.s + r.ws * n.ds) / one - r.ws * n.s / (one * one)};
}

}  // namespace

cplx FreeConvolutionPipeline::s_single(cplx w, double mean) const {
  cplx s = mean;
  for (std::size_t k = 1; k <= ray_steps_; ++k) {
    s = branch(w * (static_cast<double>(k) / static_cast<double>(ray_steps_)), mean, s);
  }
  const SFactor f = s_factor(w, mean, s);
  return f.reduced ? f.ws / w : f.s;
}

cplx FreeConvolutionPipeline::chi_single(cplx w, double mean) const {
  return w / (1.0 + w) * s_single(w, mean);
}

cplx FreeConvolutionPipeline::chi_with(cplx w, cplx sa, cplx sb) const {
  return chi_and_derivative(w, s_factor(w, p_.alpha, sa), s_factor(w, p_.beta, sb)).first;
}

cplx FreeConvolutionPipeline::chi_prime_with(cplx w, cplx sa, cplx sb) const {
  return chi_and_derivative(w, s_factor(w, p_.alpha, sa), s_factor(w, p_.beta, sb)).second;
}

cplx FreeConvolutionPipeline::chi_product(cplx w) const {
  cplx sa = p_.alpha, sb = p_.beta;
  for (std::size_t k = 1; k <= ray_steps_; ++k) {
    const cplx wk = w * (static_cast<double>(k) / static_cast<double>(ray_steps_));
    sa = branch(wk, p_.alpha, sa);
    sb = branch(wk, p_.beta, sb);
  }
  return chi_with(w, sa, sb);
}

bool FreeConvolutionPipeline::continue_to(cplx z, std::size_t steps, Root& r) const {
  r = Root{0.0, p_.alpha, p_.beta};
  // psi of the product law can have critical points on the real axis, where
  // the inverse branches; near-real targets are reached through a detour.
  std::vector<cplx> corners{0.0};
  if (std::abs(z.imag()) < 0.05 * std::abs(z)) corners.push_back(z * cplx(0.5, 0.3));
  corners.push_back(z);
  const double n = static_cast<double>(steps);
  for (std::size_t leg = 1; leg < corners.size(); ++leg) {
    const cplx from = corners[leg - 1];
    const cplx dz = (corners[leg] - from) / n;
    for (std::size_t k = 1; k <= steps; ++k) {
      const cplx zk = from + dz * static_cast<double>(k);
      // Euler predictor, then Newton with continuous branches.
      r.w += dz / chi_prime_with(r.w, r.s_alpha, r.s_beta);
      bool converged = false;
      double last = 0.0;
      for (int it = 0; it < 60; ++it) {
        r.s_alpha = branch(r.w, p_.alpha, r.s_alpha);
        r.s_beta = branch(r.w, p_.beta, r.s_beta);
        const cplx dw = (chi_with(r.w, r.s_alpha, r.s_beta) - zk) /
                        chi_prime_with(r.w, r.s_alpha, r.s_beta);
        r.w -= dw;
        last = std::abs(dw);
        if (std::abs(dw) <= 1e-15 * (1.0 + std::abs(r.w))) {
          converged = true;
          break;
        }
      }
      // Stalling at a few ulps also counts: Newton was already at rounding level.
      if (!converged && last <= 1e-13 * (1.0 + std::abs(r.w))) converged = true;
      if (!converged || !std::isfinite(r.w.real()) || !std::isfinite(r.w.imag())) return false;
    }
  }
  r.s_alpha = branch(r.w, p_.alpha, r.s_alpha);
  r.s_beta = branch(r.w, p_.beta, r.s_beta);
  // Real targets have real images; drop the rounding residue of the detour.
  if (z.imag() == 0.0) r.w = r.w.real();
  return true;
}

FreeConvolutionPipeline::Root FreeConvolutionPipeline::solve(cplx z) const {
  Root r{0.0, p_.alpha, p_.beta};
  if (z == 0.0) return r;
  // Steep stretches of the path need shorter continuation steps.
  for (std::size_t steps = ray_steps_; steps <= kMaxRaySteps; steps *= 4) {
    if (continue_to(z, steps, r)) return r;
  }
  std::ostringstream msg;
  msg << "psi_product: Newton continuation failed at z = " << z;
  throw NumericalHealthError(msg.str());
}

cplx FreeConvolutionPipeline::psi_product(cplx z) const { return solve(z).w; }

cplx FreeConvolutionPipeline::psi_product_derivative(cplx z) const {
  const Root r = solve(z);
  return 1.0 / chi_prime_with(r.w, r.s_alpha, r.s_beta);
}

// --------------------------------------------------------------- K, L, G

MomentSequence taylor_moments(const HerglotzEvaluator& h, std::size_t n) {
  const TraceParams& p = h.params();
  switch (h.kind()) {
    case HerglotzEvaluator::Kind::series: {
      const Series& c = h.coefficients();
      if (c.size() < n + 1) throw ValidationError("taylor_moments: series too short");
      MomentSequence m;
      m.f.resize(n);
      for (std::size_t k = 1; k <= n; ++k) m.f[k - 1] = 0.5 * c[k];
      return m;
    }
    case HerglotzEvaluator::Kind::stationary:
      return stationary_moments(p, n);
    case HerglotzEvaluator::Kind::classical_independent:
      return initial_moments(InitialData::classical, p, n);
    case HerglotzEvaluator::Kind::point_mass_zero:
      return initial_moments(InitialData::equal, p, n);
    case HerglotzEvaluator::Kind::free_initial:
      return initial_moments(InitialData::free, p, n);
  }
  return {};
}

cplx atom_part(cplx z, const TraceParams& p) {
  return p.a * (1.0 - z) / (1.0 + z) + p.b * (1.0 + z) / (1.0 - z);
}

cplx L_eval(const HerglotzEvaluator& h, cplx z) {
  if (z == 1.0 || z == -1.0) throw DomainError("L_eval: z = +-1 is excluded");
  return h(z) - atom_part(z, h.params());
}

cplx K_eval(const HerglotzEvaluator& h, cplx z) {
  if (z == 1.0 || z == -1.0) throw DomainError("K_eval: z = +-1 is excluded");
  const cplx hz = h(z);
  const cplx A = atom_part(z, h.params());
  const cplx L = hz - A;
  const cplx k2 = L * (L + 2.0 * A);
  const cplx direct = hz * hz - A * A;
  const double scale = std::max({1.0, std::norm(hz), std::norm(A)});
  if (std::abs(k2 - direct) > 1e-12 * scale) {
    throw NumericalHealthError("K_eval: factored square disagrees with H^2 - A^2");
  }
  const cplx k = std::sqrt(k2);
  if (k.real() < 0.0) throw NumericalHealthError("K_eval: negative real part");
  return k;
}

cplx psi_eval(const HerglotzEvaluator& h, cplx z) { return 0.5 * (h(z) - 1.0); }

long double k_squared_real(const HerglotzEvaluator& h, long double y) {
  return detail::k_squared_closed(h, y);
}

cplx cauchy_disk_point(cplx z) {
  const cplx s = std::sqrt(1.0 - 1.0 / z);
  return 1.0 / (z * (1.0 + s) * (1.0 + s));
}

cplx cauchy_eval(const HerglotzEvaluator& h, cplx z) {
  if (z.imag() == 0.0 && z.real() >= 0.0 && z.real() <= 1.0) {
    throw DomainError("cauchy_eval: z on the support [0, 1]");
  }
  const TraceParams& p = h.params();
  const cplx s = std::sqrt(1.0 - 1.0 / z);
  const cplx w = 1.0 / (z * (1.0 + s) * (1.0 + s));
  return 1.0 / (2.0 * z) + (p.alpha + p.beta) / (4.0 * z * (z - 1.0)) + h(w) / (2.0 * z * s);
}

Series k_taylor_coefficients(const MomentSequence& m, const TraceParams& p) {
  const std::size_t order = m.f.size() + 1;
  Series hser(order);
  hser[0] = 1.0;
  for (std::size_t n = 1; n < order; ++n) hser[n] = 2.0 * m.f[n - 1];
  Series atoms(order);
  atoms[0] = p.a + p.b;
  for (std::size_t n = 1; n < order; ++n) atoms[n] = 2.0 * (p.b + (n % 2 == 0 ? p.a : -p.a));
  Series sq = series_mul(hser, hser, order);
  const Series asq = series_mul(atoms, atoms, order);
  for (std::size_t n = 0; n < order; ++n) sq[n] -= asq[n];
  return series_sqrt(sq, order);
}

// ------------------------------------------------------------- densities

namespace {
// cos(theta) + r without cancellation near theta = 0 and theta = pi.
double cos_plus(double theta, double r) {
  const double sh = std::sin(0.5 * theta), ch = std::cos(0.5 * theta);
  return std::abs(theta) < 0.5 * kPi ? (1.0 + r) - 2.0 * sh * sh : 2.0 * ch * ch - (1.0 - r);
}
}  // namespace

double stationary_density(const TraceParams& p, double theta) {
  const double rad = -cos_plus(theta, p.r_plus) * cos_plus(theta, p.r_minus);
  const double s = std::abs(std::sin(theta));
  if (!(rad > 0.0) || s == 0.0) return 0.0;
  return std::sqrt(rad) / (2.0 * kPi * s);
}

CircleMeasure stationary_decomposition(const TraceParams& p, std::size_t points) {
  CircleMeasure m;
  m.atom_pi = p.a;
  m.atom_zero = p.b;
  const double centre = -p.alpha * p.beta;
  const double half = std::sqrt(std::max(0.0, (1.0 - p.alpha * p.alpha) * (1.0 - p.beta * p.beta)));
  if (half == 0.0 || points == 0) return m;
  // cos(theta) = centre + half cos(s): the radicand becomes (half sin s)^2
  // and the integrand is smooth in s even when the arc reaches 0 or pi.
  const QuadratureRule rule = gauss_legendre(0.0, kPi, points);
  m.grid.reserve(points);
  for (std::size_t j = 0; j < points; ++j) {
    const double s = rule.nodes[j];
    // 1 -+ cos(theta), each split so that no large terms cancel.
    const double sh = std::sin(0.5 * s), ch = std::cos(0.5 * s);
    const double one_minus = std::max(0.0, 1.0 - centre - half) + 2.0 * half * sh * sh;
    const double one_plus = std::max(0.0, 1.0 + centre - half) + 2.0 * half * ch * ch;
    const double sin_theta = std::sqrt(one_minus * one_plus);
    const double theta = std::atan2(sin_theta, 0.5 * (one_plus - one_minus));
    const double root = half * std::sin(s);
    if (sin_theta <= 0.0 || (!m.grid.empty() && !(theta > m.grid.back()))) continue;
    m.grid.push_back(theta);
    m.density.push_back(root / (2.0 * kPi * sin_theta));
    m.weights.push_back(rule.weights[j] * root / sin_theta);
  }
  return m;
}

CircleMeasure stationary_decomposition(const TraceParams& p, const QuadratureRule& rule) {
  CircleMeasure m;
  m.atom_pi = p.a;
  m.atom_zero = p.b;
  m.grid = rule.nodes;
  m.weights = rule.weights;
  m.density.resize(rule.size());
  for (std::size_t j = 0; j < rule.size(); ++j) m.density[j] = stationary_density(p, rule.nodes[j]);
  return m;
}

CircleMeasure density_from_boundary(const std::function<cplx(cplx)>& f, double r,
                                    const QuadratureRule& rule) {
  if (!(r > 0.0 && r < 1.0)) throw ValidationError("density_from_boundary: radius must be in (0, 1)");
  CircleMeasure m;
  m.grid = rule.nodes;
  m.weights = rule.weights;
  m.density.resize(rule.size());
  for (std::size_t j = 0; j < rule.size(); ++j) {
    m.density[j] = f(std::polar(r, rule.nodes[j])).real() / (2.0 * kPi);
  }
  return m;
}

CircleMeasure density_from_boundary(const HerglotzEvaluator& h, double r,
                                    const QuadratureRule& rule) {
  return density_from_boundary([&h](cplx z) { return h(z); }, r, rule);
}

// ------------------------------------------------------------------- PDE

cplx pde_source(cplx z, const TraceParams& p) {
  const double al = p.alpha, be = p.beta;
  const cplx den = 1.0 - z * z;
  return 2.0 * z * (al * z * z + 2.0 * be * z + al) * (be * z * z + 2.0 * al * z + be) /
         (den * den * den);
}

double pde_residual(const MomentTrajectory& traj, const TraceParams& p,
                    const std::vector<cplx>& z_grid, const std::vector<double>& t_grid) {
  const std::size_t n_states = traj.states.size();
  if (n_states < 3) throw ValidationError("pde_residual: trajectory needs at least 3 states");
  auto coeffs = [&](std::size_t i) {
    Series c(traj.states[i].f.size() + 1);
    c[0] = 1.0;
    for (std::size_t n = 0; n < traj.states[i].f.size(); ++n) c[n + 1] = 2.0 * traj.states[i].f[n];
    return c;
  };
  double worst = 0.0;
  for (double t : t_grid) {
    const auto it = std::lower_bound(traj.times.begin(), traj.times.end(), t);
    std::size_t i = static_cast<std::size_t>(it - traj.times.begin());
    if (i > 0 && (i == n_states || t - traj.times[i - 1] < traj.times[i] - t)) --i;
    i = std::clamp<std::size_t>(i, 1, n_states - 2);
    const double dt_lo = traj.times[i] - traj.times[i - 1];
    const double dt_hi = traj.times[i + 1] - traj.times[i];
    if (std::abs(dt_lo - dt_hi) > 1e-9 * dt_hi) {
      throw ValidationError("pde_residual: stored times are not uniformly spaced");
    }
    const Series before = coeffs(i - 1), here = coeffs(i), after = coeffs(i + 1);
    for (cplx z : z_grid) {
      const SeriesValue v = series_eval(here, z);
      const cplx dt = (series_eval(after, z).value - series_eval(before, z).value) / (dt_lo + dt_hi);
      worst = std::max(worst, std::abs(dt + z * v.value * v.d1 - pde_source(z, p)));
    }
  }
  return worst;
}

void write_herglotz_csv(std::ostream& os, const std::vector<HerglotzSample>& rows) {
  os << "t,z_re,z_im,H_re,H_im\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& r : rows) {
    os << r.t << ',' << r.z.real() << ',' << r.z.imag() << ',' << r.h.real() << ',' << r.h.imag()
       << '\n';
  }
}

}  // namespace liberation
