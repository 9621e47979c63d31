#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "liberation/measures.hpp"
#include "liberation/params.hpp"

namespace liberation {

/// Built-in initial positions of the pair (R, S).
enum class InitialData {
  free,       // R and S free: the initial law is already the stationary one
  classical,  // R and S commuting and classically independent
  equal,      // S = R, so R S = I and the law is the point mass at angle 0
};

InitialData parse_initial_data(const std::string& name);
std::string to_string(InitialData kind);

struct MomentTrajectory {
  std::vector<double> times;
  std::vector<MomentSequence> states;
  std::size_t order = 0;
  double step = 0.0;
};

/// Right-hand side of the closed moment hierarchy:
///   f_n' = -n f_n - n sum_{k=1}^{n-1} f_k f_{n-k} + n^2 s_n,
/// s_n = alpha beta for odd n, (alpha^2 + beta^2)/2 for even n.
std::vector<double> moment_ode_rhs(const MomentSequence& f, const TraceParams& p);

/// Classical RK4 with fixed step. The step is shrunk so that it divides
/// t_end exactly. Every `record_stride`-th state is stored, plus the last one.
MomentTrajectory evolve_moments(const MomentSequence& f0, const TraceParams& p, double t_end,
                                double step = 1e-3, std::size_t record_stride = 1);

/// Taylor coefficients of the stationary Herglotz transform, halved.
MomentSequence stationary_moments(const TraceParams& p, std::size_t n);

/// Moments of the built-in initial laws. `equal` requires alpha == beta.
MomentSequence initial_moments(InitialData kind, const TraceParams& p, std::size_t n);

/// CSV with header t,f1,...,fN.
void write_trajectory_csv(std::ostream& os, const MomentTrajectory& traj);

}  // namespace liberation
