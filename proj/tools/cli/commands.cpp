#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "acceptance/acceptance.hpp"
#include "liberation/bridge.hpp"
#include "liberation/measures.hpp"
#include "liberation/moment_engine.hpp"
#include "liberation/quadrature.hpp"
#include "liberation/rmt.hpp"
#include "liberation/subordination.hpp"
#include "liberation/transforms.hpp"

namespace liberation::cli {

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const fs::path& dir, const std::string& name) {
  fs::create_directories(dir);
  std::ofstream os(dir / name);
  if (!os) throw ValidationError("cannot write " + (dir / name).string());
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  return os;
}

void write_json(const fs::path& dir, const std::string& name, const nlohmann::json& j) {
  std::ofstream os = open_output(dir, name);
  os << j.dump(2) << '\n';
}

TraceParams read_params(const Settings& s) {
  return TraceParams::from_traces(s.require<double>("alpha"), s.require<double>("beta"));
}

std::size_t positive_count(const Settings& s, const std::string& key, std::size_t fallback) {
  const long long v = s.get<long long>(key, static_cast<long long>(fallback));
  if (v < 1) throw ValidationError("field '" + s.path(key) + "': must be >= 1");
  return static_cast<std::size_t>(v);
}

// Initial moments from either an explicit measure or a named preset.
MomentSequence read_initial(const Settings& s, const TraceParams& p, std::size_t n) {
  if (s.has("initial_measure")) {
    CircleMeasure m;
    try {
      m = s.values().at("initial_measure").get<CircleMeasure>();
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("field '" + s.path("initial_measure") + "': " + e.what());
    }
    m.validate();
    return moments_from_measure(m, n);
  }
  return initial_moments(parse_initial_data(s.get<std::string>("init", "classical")), p, n);
}

HerglotzEvaluator read_initial_evaluator(const Settings& s, const TraceParams& p) {
  if (s.has("initial_measure")) return HerglotzEvaluator::from_moments(read_initial(s, p, 128), p);
  return HerglotzEvaluator::initial(parse_initial_data(s.get<std::string>("init", "classical")), p);
}

std::string time_tag(double t) {
  std::ostringstream os;
  os << t;
  return os.str();
}

}  // namespace

int cmd_evolve(const Settings& s, const fs::path& out, std::ostream& log) {
  const TraceParams p = read_params(s);
  const std::size_t n = positive_count(s, "moments", 64);
  const double t_end = s.get<double>("t_end", 4.0);
  const double step = s.get<double>("step", 1e-3);
  const std::size_t stride = positive_count(s, "stride", 10);
  const double radius = s.get<double>("radius", 0.85);
  const std::size_t points = positive_count(s, "density_points", 512);
  if (!(radius > 0.0 && radius < 1.0)) {
    throw ValidationError("field '" + s.path("radius") + "': must lie in (0, 1)");
  }

  MomentSequence f0 = read_initial(s, p, n);
  const MomentTrajectory traj = evolve_moments(f0, p, t_end, step, stride);
  {
    std::ofstream os = open_output(out, "trajectory.csv");
    write_trajectory_csv(os, traj);
  }

  // Poisson-smoothed densities of nu_t at the stored times nearest to the request.
  const QuadratureRule rule = midpoint_rule(0.0, std::numbers::pi, points);
  nlohmann::json densities = nlohmann::json::array();
  for (double t : s.get<std::vector<double>>("density_times", {t_end})) {
    std::size_t best = 0;
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
      if (std::abs(traj.times[i] - t) < std::abs(traj.times[best] - t)) best = i;
    }
    const HerglotzEvaluator h = HerglotzEvaluator::from_moments(traj.states[best], p, radius);
    const CircleMeasure m = density_from_boundary(h, radius, rule);
    const std::string name = "density_t" + time_tag(traj.times[best]) + ".csv";
    std::ofstream os = open_output(out, name);
    write_density_csv(os, m);
    densities.push_back({{"t", traj.times[best]}, {"file", name}, {"tail_bound", h.tail_bound(radius)}});
  }
  write_json(out, "evolve.json",
             {{"settings", s.values()}, {"steps", traj.times.size()}, {"densities", densities}});
  log << "evolve: " << n << " moments to t = " << t_end << ", " << traj.times.size()
      << " stored states, " << densities.size() << " density file(s) in " << out.string() << '\n';
  return 0;
}

int cmd_stationary(const Settings& s, const fs::path& out, std::ostream& log) {
  const TraceParams p = read_params(s);
  const std::size_t points = positive_count(s, "points", 400);
  const CircleMeasure nu = stationary_decomposition(p, points);
  nu.validate();
  {
    std::ofstream os = open_output(out, "stationary_density.csv");
    write_density_csv(os, nu);
  }
  const IntervalMeasure mu = measure_mu_from_nu(nu, p);
  {
    std::ofstream os = open_output(out, "projection_density.csv");
    write_density_csv(os, mu);
  }
  write_json(out, "stationary.json",
             {{"alpha", p.alpha},
              {"beta", p.beta},
              {"atom_pi", p.a},
              {"atom_zero", p.b},
              {"r_plus", p.r_plus},
              {"r_minus", p.r_minus},
              {"total_mass", nu.total_mass()},
              {"measure", nu},
              {"projection_measure", mu}});
  log << "stationary: atoms " << p.a << " at pi and " << p.b << " at 0, arc mass "
      << nu.continuous_mass() << ", total " << nu.total_mass() << '\n';
  return 0;
}

int cmd_flow(const Settings& s, const fs::path& out, std::ostream& log) {
  const TraceParams p = read_params(s);
  const HerglotzEvaluator h0 = read_initial_evaluator(s, p);
  const double t_end = s.get<double>("t_end", 2.0);
  const double step = s.get<double>("step", 1e-4);
  const std::size_t stride = positive_count(s, "stride", 100);

  std::vector<cplx> seeds;
  for (double x : s.get<std::vector<double>>("seeds", {-0.6, -0.3, 0.3, 0.6})) seeds.emplace_back(x);
  const auto radii = s.get<std::vector<double>>("radii", {});
  const long long n_angles = s.get<long long>("n_angles", 8);
  if (!radii.empty() && n_angles < 1) {
    throw ValidationError("field '" + s.path("n_angles") + "': must be >= 1");
  }
  for (double r : radii) {
    for (long long k = 0; k < n_angles; ++k) {
      seeds.push_back(std::polar(r, 2.0 * std::numbers::pi * static_cast<double>(k) /
                                        static_cast<double>(n_angles)));
    }
  }

  std::vector<FlowState> states;
  std::vector<double> deviation;
  std::size_t died = 0;
  double worst = 0.0;
  for (cplx z0 : seeds) {
    const std::vector<FlowState> traj = flow_ode(z0, p, h0, t_end, step, stride);
    if (!traj.back().alive) ++died;
    for (const FlowState& st : traj) {
      double dev = std::numeric_limits<double>::quiet_NaN();
      if (h0.is_closed_form() && z0.imag() == 0.0 && st.alive) {
        try {
          dev = std::abs(phi_closed_form(z0.real(), st.t, p, h0) - st.phi.real());
          worst = std::max(worst, dev);
        } catch (const DomainError&) {
        }
      }
      states.push_back(st);
      deviation.push_back(dev);
    }
  }
  {
    std::ofstream os = open_output(out, "flow.csv");
    write_flow_csv(os, states, deviation);
  }
  if (h0.is_closed_form()) {
    std::ofstream os = open_output(out, "domain.csv");
    os << "t,x_minus,x_plus\n";
    try {
      for (int k = 1; k <= 20; ++k) {
        const double t = t_end * k / 20.0;
        const DomainBoundary b = domain_boundary(t, p, h0);
        os << t << ',' << b.x_minus << ',' << b.x_plus << '\n';
      }
    } catch (const DomainError& e) {
      log << "flow: no domain endpoints: " << e.what() << '\n';
    }
  }
  log << "flow: " << seeds.size() << " seeds to t = " << t_end << ", " << died
      << " reach the circle; largest closed-form deviation " << worst << '\n';
  return 0;
}

int cmd_bridge(const Settings& s, const fs::path& out, std::ostream& log) {
  const TraceParams p = read_params(s);
  const std::size_t n = positive_count(s, "moments", 16);
  const double t = s.get<double>("t", 1.0);
  const MomentSequence f0 = read_initial(s, p, n);
  const MomentSequence f = t > 0.0 ? evolve_moments(f0, p, t, 1e-3, 1u << 30).states.back() : f0;
  const std::vector<double> m = project_moments(f, p, n);
  {
    std::ofstream os = open_output(out, "bridge.csv");
    os << "n,f,m\n";
    for (std::size_t k = 0; k < n; ++k) os << k + 1 << ',' << f.f[k] << ',' << m[k] << '\n';
  }
  const CircleMeasure nu = stationary_decomposition(p);
  const IntervalMeasure mu = measure_mu_from_nu(nu, p);
  const CircleMeasure sigma = sigma_from_nu(nu, p);
  {
    std::ofstream os = open_output(out, "mu_infinity.csv");
    write_density_csv(os, mu);
  }
  write_json(out, "bridge.json",
             {{"t", t},
              {"mu_infinity", mu},
              {"sigma_infinity_mass", sigma.total_mass()},
              {"settings", s.values()}});
  log << "bridge: " << n << " projection moments at t = " << t << ", mu_infinity atoms "
      << mu.atom_zero << " at 0 and " << mu.atom_one << " at 1\n";
  return 0;
}

int cmd_oracle(const Settings& s, const fs::path& out, std::ostream& log) {
  EnsembleConfig c;
  try {
    from_json(s.values(), c);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("oracle config: " + std::string(e.what()));
  }
  c.validate();
  const MonteCarloResult res = monte_carlo(c);
  {
    std::ofstream os = open_output(out, "monte_carlo.csv");
    write_monte_carlo_csv(os, res);
  }

  // ODE predictions at the achieved traces.
  const TraceParams p = TraceParams::from_traces(res.alpha, res.beta);
  MomentSequence f0;
  switch (c.preset) {
    case PairPreset::free: f0 = initial_moments(InitialData::free, p, c.n_moments); break;
    case PairPreset::classical: f0 = initial_moments(InitialData::classical, p, c.n_moments); break;
    case PairPreset::equal: f0 = initial_moments(InitialData::equal, p, c.n_moments); break;
    case PairPreset::custom: {
      // Deterministic pair: its moments at U = I are the initial data.
      Rng rng(stream_seed(c.seed, 0));
      const ProjectionPair pair = build_pair(c.n, c.alpha, c.beta, c.preset, rng, c.angles);
      const CMatrix id = CMatrix::Identity(pair.R.rows(), pair.R.cols());
      f0 = MomentSequence{0.0, empirical_moments(pair, id, c.n_moments).symmetry};
      break;
    }
  }
  double worst_z = 0.0;
  {
    std::ofstream os = open_output(out, "comparison.csv");
    os << "process,t,n,mean,stderr,predicted,z_score\n";
    std::vector<double> times = c.t_grid;
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    for (double t : times) {
      const MomentSequence f = t > 0.0 ? evolve_moments(f0, p, t, 1e-3, 1u << 30).states.back() : f0;
      const std::vector<double> m = project_moments(f, p, c.n_moments);
      for (const char* process : {"symmetry", "projection"}) {
        for (std::size_t k = 1; k <= c.n_moments; ++k) {
          const MonteCarloRow& row = res.at(process, t, k);
          const double predicted = std::string(process) == "symmetry" ? f.f[k - 1] : m[k - 1];
          const double z = row.stderr_ > 0.0 ? (row.mean - predicted) / row.stderr_ : 0.0;
          worst_z = std::max(worst_z, std::abs(z));
          os << process << ',' << t << ',' << k << ',' << row.mean << ',' << row.stderr_ << ','
             << predicted << ',' << z << '\n';
        }
      }
    }
  }
  write_json(out, "oracle.json",
             {{"config", c},
              {"achieved_alpha", res.alpha},
              {"achieved_beta", res.beta},
              {"max_binomial_defect", res.max_binomial_defect},
              {"max_unitarity_defect", res.max_unitarity_defect},
              {"max_symmetry_defect", res.max_symmetry_defect},
              {"max_imag", res.max_imag},
              {"max_abs_z", worst_z},
              {"seconds", res.seconds}});
  log << "oracle: " << c.n_samples << " samples at N = " << c.n << " in " << res.seconds
      << " s, largest |z| " << worst_z << ", binomial defect " << res.max_binomial_defect << '\n';
  return 0;
}

int cmd_verify(const Settings& s, const fs::path& out, std::ostream& log) {
  acceptance::Options o;
  for (int id : s.get<std::vector<int>>("only", {})) {
    if (id < 1 || id > acceptance::kCriterionCount) {
      throw ValidationError("field '" + s.path("only") + "': no criterion " + std::to_string(id));
    }
    o.only.insert(id);
  }
  const std::string fault = s.get<std::string>("inject_fault", "");
  if (fault == "binom") {
    o.relation.atom = 0.26;  // corrupted constant
  } else if (!fault.empty()) {
    throw ValidationError("field '" + s.path("inject_fault") + "': unknown fault '" + fault +
                          "' (expected binom)");
  }
  o.threads = static_cast<std::size_t>(s.get<long long>("threads", 0));
  o.seed = s.get<std::uint64_t>("seed", o.seed);

  std::vector<acceptance::Result> results;
  for (int id = 1; id <= acceptance::kCriterionCount; ++id) {
    if (!o.only.empty() && o.only.count(id) == 0) continue;
    results.push_back(acceptance::run_one(id, o));
    log << acceptance::format_line(results.back()) << std::endl;
  }
  const auto passed = static_cast<std::size_t>(
      std::count_if(results.begin(), results.end(), [](const auto& r) { return r.passed; }));
  log << passed << '/' << results.size() << " criteria passed" << (fault.empty() ? "" : " (fault " + fault + " injected)")
      << '\n';
  nlohmann::json report{{"passed", passed == results.size()},
                        {"fault", fault},
                        {"seed", o.seed},
                        {"criteria", results}};
  const fs::path report_path = s.get<std::string>("report", (out / "verify.json").string());
  write_json(report_path.parent_path().empty() ? fs::path(".") : report_path.parent_path(),
             report_path.filename().string(), report);
  return passed == results.size() ? 0 : 2;
}

}  // namespace liberation::cli
