#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "commands.hpp"
#include "liberation/errors.hpp"

using liberation::cli::Settings;

namespace {

// Binds an optional flag to a settings key; unset flags leave the config alone.
class Bindings {
 public:
  template <class T>
  CLI::Option* add(CLI::App* app, const std::string& key, const std::string& help) {
    auto value = std::make_shared<std::optional<T>>();
    std::string name = "--" + key;
    for (char& c : name) {
      if (c == '_') c = '-';
    }
    CLI::Option* opt = app->add_option(name, *value, help);
    apply_.push_back([key, value](Settings& s) { s.set(key, *value); });
    return opt;
  }

  void apply(Settings& s) const {
    for (const auto& f : apply_) f(s);
  }

 private:
  std::vector<std::function<void(Settings&)>> apply_;
};

struct Command {
  CLI::App* app = nullptr;
  Bindings flags;
  std::function<int(const Settings&, const std::filesystem::path&, std::ostream&)> run;
};

void add_traces(Command& c) {
  c.flags.add<double>(c.app, "alpha", "trace of R, in [-1, 1]");
  c.flags.add<double>(c.app, "beta", "trace of S, in [-1, 1]");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Free liberation toolkit: moment flow, transforms, subordination and a matrix oracle"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  app.add_option("--config", config, "JSON config; top-level keys plus one object per subcommand");
  app.add_option("--out", out, "output directory")->capture_default_str();
  app.add_option("--seed", seed, "RNG seed (oracle, verify)");

  std::vector<std::pair<std::string, Command>> commands;
  auto make = [&](const std::string& name, const std::string& help, auto run) -> Command& {
    Command c;
    c.app = app.add_subcommand(name, help);
    c.run = run;
    commands.emplace_back(name, std::move(c));
    return commands.back().second;
  };
  commands.reserve(6);

  {
    Command& c = make("evolve", "integrate the moment hierarchy and write densities",
                      liberation::cli::cmd_evolve);
    add_traces(c);
    c.flags.add<std::string>(c.app, "init", "initial data: free, classical or equal");
    c.flags.add<double>(c.app, "t_end", "final time");
    c.flags.add<double>(c.app, "step", "RK4 step");
    c.flags.add<long long>(c.app, "moments", "number of moments");
    c.flags.add<long long>(c.app, "stride", "store every k-th step");
    c.flags.add<std::vector<double>>(c.app, "density_times", "times at which to write densities");
    c.flags.add<double>(c.app, "radius", "Poisson radius for densities, in (0, 1)");
    c.flags.add<long long>(c.app, "density_points", "angles in (0, pi)");
  }
  {
    Command& c = make("stationary", "stationary law and its projection picture",
                      liberation::cli::cmd_stationary);
    add_traces(c);
    c.flags.add<long long>(c.app, "points", "density grid size");
  }
  {
    Command& c = make("flow", "characteristic flow from real or complex seeds", liberation::cli::cmd_flow);
    add_traces(c);
    c.flags.add<std::string>(c.app, "init", "initial data: free, classical or equal");
    c.flags.add<double>(c.app, "t_end", "final time");
    c.flags.add<double>(c.app, "step", "RK4 step");
    c.flags.add<long long>(c.app, "stride", "store every k-th step");
    c.flags.add<std::vector<double>>(c.app, "seeds", "real seeds in (-1, 1)");
    c.flags.add<std::vector<double>>(c.app, "radii", "radii of complex seed circles");
    c.flags.add<long long>(c.app, "n_angles", "seeds per circle");
  }
  {
    Command& c = make("bridge", "projection moments from symmetry moments", liberation::cli::cmd_bridge);
    add_traces(c);
    c.flags.add<std::string>(c.app, "init", "initial data: free, classical or equal");
    c.flags.add<double>(c.app, "t", "time");
    c.flags.add<long long>(c.app, "moments", "number of moments");
  }
  {
    Command& c = make("oracle", "Monte Carlo over unitary Brownian motion", liberation::cli::cmd_oracle);
    add_traces(c);
    c.flags.add<long long>(c.app, "N", "matrix size");
    c.flags.add<double>(c.app, "delta", "time step");
    c.flags.add<std::string>(c.app, "preset", "free, equal, classical or custom");
    c.flags.add<std::vector<double>>(c.app, "angles", "principal angles of the custom preset");
    c.flags.add<long long>(c.app, "n_samples", "number of samples");
    c.flags.add<long long>(c.app, "n_moments", "moments per process");
    c.flags.add<std::vector<double>>(c.app, "t_grid", "observation times");
    c.flags.add<long long>(c.app, "threads", "worker threads, 0 for all cores");
    c.flags.add<long long>(c.app, "reorth_every", "steps between re-unitarizations");
  }
  {
    Command& c = make("verify", "run the acceptance criteria", liberation::cli::cmd_verify);
    c.flags.add<std::vector<int>>(c.app, "only", "criterion ids to run");
    c.flags.add<std::string>(c.app, "inject_fault", "corrupt a constant on purpose: binom");
    c.flags.add<long long>(c.app, "threads", "worker threads, 0 for all cores");
    c.flags.add<std::string>(c.app, "report", "JSON report path");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  for (const auto& [name, c] : commands) {
    if (!c.app->parsed()) continue;
    try {
      Settings s = Settings::load(name, config);
      c.flags.apply(s);
      s.set("seed", seed);
      return c.run(s, out, std::cout);
    } catch (const liberation::ValidationError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    } catch (const nlohmann::json::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 1;
    } catch (const liberation::DomainError& e) {
      std::cerr << "domain error: " << e.what() << '\n';
      return 2;
    } catch (const liberation::NumericalHealthError& e) {
      std::cerr << "numerical error: " << e.what() << '\n';
      return 2;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
      return 2;
    }
  }
  return 1;
}
