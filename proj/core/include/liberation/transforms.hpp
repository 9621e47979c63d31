#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <vector>

#include "liberation/measures.hpp"
#include "liberation/moment_engine.hpp"
#include "liberation/params.hpp"
#include "liberation/quadrature.hpp"
#include "liberation/series.hpp"

namespace liberation {

using cplx = std::complex<double>;

class FreeConvolutionPipeline;

/// H(z) = int (zeta + z)/(zeta - z) dnu(zeta) for a symmetric law nu on the
/// circle, either as a truncated series 1 + 2 sum f_n z^n or in closed form.
///
/// Closed forms pick the square-root sign with positive real part, which is
/// the principal branch wherever the latter is continuous on the disk.
class HerglotzEvaluator {
 public:
  enum class Kind {
    series,
    stationary,             // t = infinity
    classical_independent,  // R, S commuting and independent
    point_mass_zero,        // S = R
    free_initial,           // R, S free, through the S-transform chain
  };

  static HerglotzEvaluator from_moments(const MomentSequence& m, const TraceParams& p,
                                        double r_max = 0.9);
  static HerglotzEvaluator stationary(const TraceParams& p);
  static HerglotzEvaluator classical_independent(const TraceParams& p);
  /// Requires alpha == beta.
  static HerglotzEvaluator point_mass_zero(const TraceParams& p);
  static HerglotzEvaluator free_initial(const TraceParams& p);
  static HerglotzEvaluator initial(InitialData kind, const TraceParams& p);

  /// Throws DomainError for |z| >= 1, and for |z| > r_max on a series.
  cplx operator()(cplx z) const;
  cplx derivative(cplx z) const;

  Kind kind() const noexcept { return kind_; }
  bool is_closed_form() const noexcept { return kind_ != Kind::series; }
  const TraceParams& params() const noexcept { return p_; }
  /// Coefficients of H, c[0] = 1, c[n] = 2 f_n. Empty for closed forms.
  const Series& coefficients() const noexcept { return coeffs_; }
  double r_max() const noexcept { return r_max_; }
  /// 2|z|^{N+1}/(1-|z|) for a series of order N, zero for closed forms.
  double tail_bound(double r) const;
  /// Non-null only for free_initial.
  const FreeConvolutionPipeline* pipeline() const noexcept { return pipeline_.get(); }

 private:
  Kind kind_ = Kind::series;
  TraceParams p_;
  Series coeffs_;
  double r_max_ = 1.0;
  std::shared_ptr<const FreeConvolutionPipeline> pipeline_;
};

/// The free multiplicative convolution of the laws of R and S, carried out
/// with S-transforms. Branches are fixed by S(0) = 1/mean and continued
/// along rays from the origin.
class FreeConvolutionPipeline {
 public:
  /// Needs alpha * beta != 0 (both means nonzero). Checks the branch choice
  /// on a small grid and throws NumericalHealthError if it does not hold.
  explicit FreeConvolutionPipeline(const TraceParams& p, std::size_t ray_steps = 64);

  /// Moment generating function of the law of R: z (z + alpha)/(1 - z^2).
  cplx psi_single(cplx z, double mean) const;
  /// S-transform of (1+mean)/2 delta_1 + (1-mean)/2 delta_{-1}, branch with S(0) = 1/mean.
  cplx s_single(cplx w, double mean) const;
  /// chi = w/(1+w) S, the inverse of psi.
  cplx chi_single(cplx w, double mean) const;
  /// chi of the product law: w/(1+w) S_alpha(w) S_beta(w).
  cplx chi_product(cplx w) const;
  /// psi of the product law, solved from chi_product(psi) = z.
  cplx psi_product(cplx z) const;
  cplx psi_product_derivative(cplx z) const;
  cplx herglotz(cplx z) const { return 1.0 + 2.0 * psi_product(z); }

 private:
  struct Root {
    cplx w;
    cplx s_alpha;
    cplx s_beta;
  };
  static constexpr std::size_t kMaxRaySteps = 4096;
  Root solve(cplx z) const;
  bool continue_to(cplx z, std::size_t steps, Root& r) const;
  static cplx branch(cplx w, double mean, cplx previous);
  cplx chi_with(cplx w, cplx sa, cplx sb) const;
  cplx chi_prime_with(cplx w, cplx sa, cplx sb) const;

  TraceParams p_;
  std::size_t ray_steps_;
};

/// f_1..f_n of the law behind an evaluator: the stored series, or the
/// matching built-in moments for closed forms.
MomentSequence taylor_moments(const HerglotzEvaluator& h, std::size_t n);

/// a (1-z)/(1+z) + b (1+z)/(1-z): the Herglotz transform of the forced atoms.
cplx atom_part(cplx z, const TraceParams& p);

/// L = H - atom_part.
cplx L_eval(const HerglotzEvaluator& h, cplx z);
/// K = sqrt(L (L + 2 atom_part)), principal branch. Throws DomainError at
/// z = +-1 and NumericalHealthError if the factored square disagrees with
/// H^2 - atom_part^2 beyond 1e-12 relative.
cplx K_eval(const HerglotzEvaluator& h, cplx z);
/// (H - 1)/2 = sum f_n z^n.
cplx psi_eval(const HerglotzEvaluator& h, cplx z);

/// K(0, z)^2 at real z = (y-1)/(y+1), in long double and in a form that
/// stays accurate as y -> 0 and y -> infinity. Closed-form evaluators only.
long double k_squared_real(const HerglotzEvaluator& h, long double y);

/// Maps z outside [0, 1] to the point of the unit disk used by the Cauchy
/// transform: 2z - 1 - 2 sqrt(z^2 - z), branch with |result| < 1.
cplx cauchy_disk_point(cplx z);

/// Cauchy transform of the projection law mu_t, int dmu(x)/(z - x).
/// Throws DomainError for z on [0, 1].
cplx cauchy_eval(const HerglotzEvaluator& h, cplx z);

/// Taylor coefficients of K from a moment sequence (series arithmetic).
Series k_taylor_coefficients(const MomentSequence& m, const TraceParams& p);

/// nu_infinity: atoms a at pi and b at 0, plus the arc density
///   sqrt(-(cos t + r_+)(cos t + r_-)) / (2 pi |sin t|) on -r_+ <= cos t <= -r_-,
/// sampled on a Gauss-Legendre grid adapted to the arc.
CircleMeasure stationary_decomposition(const TraceParams& p, std::size_t points = 400);
/// Same measure, density sampled on a caller-supplied rule over (0, pi).
CircleMeasure stationary_decomposition(const TraceParams& p, const QuadratureRule& rule);
/// Arc density of nu_infinity at a single angle (zero off the arc).
double stationary_density(const TraceParams& p, double theta);

/// Re f(r e^{i theta}) / (2 pi) on the given rule. Atoms show up as Poisson
/// spikes and are not removed.
CircleMeasure density_from_boundary(const std::function<cplx(cplx)>& f, double r,
                                    const QuadratureRule& rule);
CircleMeasure density_from_boundary(const HerglotzEvaluator& h, double r,
                                    const QuadratureRule& rule);

/// Right-hand side of the Herglotz PDE:
///   2z(alpha z^2 + 2 beta z + alpha)(beta z^2 + 2 alpha z + beta)/(1 - z^2)^3.
cplx pde_source(cplx z, const TraceParams& p);

/// max |dH/dt + z H dH/dz - source| over z_grid and the stored interior
/// times of the trajectory closest to t_grid. Time derivatives are central
/// differences of neighbouring stored states, z-derivatives are exact.
double pde_residual(const MomentTrajectory& traj, const TraceParams& p,
                    const std::vector<cplx>& z_grid, const std::vector<double>& t_grid);

struct HerglotzSample {
  double t;
  cplx z;
  cplx h;
};
/// CSV with header t,z_re,z_im,H_re,H_im.
void write_herglotz_csv(std::ostream& os, const std::vector<HerglotzSample>& rows);

}  // namespace liberation
