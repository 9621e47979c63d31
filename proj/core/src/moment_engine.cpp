#include "liberation/moment_engine.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "liberation/errors.hpp"
#include "liberation/series.hpp"

namespace liberation {

InitialData parse_initial_data(const std::string& name) {
  if (name == "free") return InitialData::free;
  if (name == "classical") return InitialData::classical;
  if (name == "equal") return InitialData::equal;
  throw ValidationError("unknown initial data '" + name + "' (expected free, classical or equal)");
}

std::string to_string(InitialData kind) {
  switch (kind) {
    case InitialData::free: return "free";
    case InitialData::classical: return "classical";
    case InitialData::equal: return "equal";
  }
  return "?";
}

namespace {

void rhs_into(const std::vector<double>& f, double odd_src, double even_src,
              std::vector<double>& out) {
  const std::size_t n_max = f.size();
  for (std::size_t n = 1; n <= n_max; ++n) {
    double conv = 0.0;
    for (std::size_t k = 1; k < n; ++k) conv += f[k - 1] * f[n - k - 1];
    const double nn = static_cast<double>(n);
    const double src = (n % 2 == 1) ? odd_src : even_src;
    out[n - 1] = -nn * f[n - 1] - nn * conv + nn * nn * src;
  }
}

}  // namespace

std::vector<double> moment_ode_rhs(const MomentSequence& f, const TraceParams& p) {
  if (f.f.empty()) throw ValidationError("moment_ode_rhs: need at least one moment");
  std::vector<double> out(f.f.size());
  rhs_into(f.f, p.alpha * p.beta, 0.5 * (p.alpha * p.alpha + p.beta * p.beta), out);
  return out;
}

MomentTrajectory evolve_moments(const MomentSequence& f0, const TraceParams& p, double t_end,
                                double step, std::size_t record_stride) {
  if (!(step > 0.0)) throw ValidationError("evolve_moments: step must be > 0");
  if (!(t_end >= 0.0)) throw ValidationError("evolve_moments: t_end must be >= 0");
  if (f0.f.empty()) throw ValidationError("evolve_moments: need at least one moment");
  if (record_stride == 0) record_stride = 1;

  const auto steps = static_cast<std::size_t>(std::ceil(t_end / step - 1e-9));
  const double h = steps > 0 ? t_end / static_cast<double>(steps) : step;
  const double odd_src = p.alpha * p.beta;
  const double even_src = 0.5 * (p.alpha * p.alpha + p.beta * p.beta);

  MomentTrajectory traj;
  traj.order = f0.f.size();
  traj.step = h;
  traj.times.push_back(f0.t);
  traj.states.push_back(f0);

  const std::size_t n = f0.f.size();
  std::vector<double> y = f0.f, k1(n), k2(n), k3(n), k4(n), tmp(n);
  for (std::size_t s = 1; s <= steps; ++s) {
    rhs_into(y, odd_src, even_src, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    rhs_into(tmp, odd_src, even_src, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    rhs_into(tmp, odd_src, even_src, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
    rhs_into(tmp, odd_src, even_src, k4);
    for (std::size_t i = 0; i < n; ++i) {
      y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      if (!std::isfinite(y[i])) {
        std::ostringstream msg;
        msg << "evolve_moments: f_" << i + 1 << " became non-finite at t = " << f0.t + s * h;
        throw NumericalHealthError(msg.str());
      }
    }
    if (s % record_stride == 0 || s == steps) {
      const double t = f0.t + static_cast<double>(s) * h;
      traj.times.push_back(t);
      traj.states.push_back(MomentSequence{t, y});
    }
  }
  return traj;
}

MomentSequence stationary_moments(const TraceParams& p, std::size_t n) {
  if (n == 0) throw ValidationError("stationary_moments: need n >= 1");
  const double ab = p.alpha * p.beta;
  const double diff = p.alpha - p.beta;
  // (1 - z^2)^2 + 4z(ab (1+z)^2 + (alpha-beta)^2 z)
  const Series quartic{1.0, 4.0 * ab, -2.0 + 8.0 * ab + 4.0 * diff * diff, 4.0 * ab, 1.0};
  const std::size_t order = n + 1;
  const Series h = series_mul(series_sqrt(quartic, order), even_geometric(order), order);
  MomentSequence out;
  out.t = std::numeric_limits<double>::infinity();
  out.f.resize(n);
  for (std::size_t k = 1; k <= n; ++k) out.f[k - 1] = 0.5 * h[k];
  return out;
}

MomentSequence initial_moments(InitialData kind, const TraceParams& p, std::size_t n) {
  if (n == 0) throw ValidationError("initial_moments: need n >= 1");
  MomentSequence out;
  switch (kind) {
    case InitialData::free:
      out = stationary_moments(p, n);
      break;
    case InitialData::classical:
      out.f.resize(n);
      for (std::size_t k = 1; k <= n; ++k) out.f[k - 1] = (k % 2 == 0) ? 1.0 : p.alpha * p.beta;
      break;
    case InitialData::equal:
      if (std::abs(p.alpha - p.beta) > 1e-15) {
        throw ValidationError("initial data 'equal' needs alpha == beta");
      }
      out.f.assign(n, 1.0);
      break;
  }
  out.t = 0.0;
  return out;
}

void write_trajectory_csv(std::ostream& os, const MomentTrajectory& traj) {
  os << 't';
  for (std::size_t n = 1; n <= traj.order; ++n) os << ",f" << n;
  os << '\n' << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& s : traj.states) {
    os << s.t;
    for (double v : s.f) os << ',' << v;
    os << '\n';
  }
}

}  // namespace liberation
