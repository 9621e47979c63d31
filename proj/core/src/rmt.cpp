#include "liberation/rmt.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <iomanip>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "liberation/bridge.hpp"
#include "liberation/errors.hpp"
#include "liberation/measures.hpp"

#ifdef LIBERATION_OPENBLAS
extern "C" void openblas_set_num_threads(int);
#endif

namespace liberation {

PairPreset parse_pair_preset(const std::string& name) {
  if (name == "free") return PairPreset::free;
  if (name == "equal") return PairPreset::equal;
  if (name == "classical") return PairPreset::classical;
  if (name == "custom") return PairPreset::custom;
  throw ValidationError("unknown preset '" + name + "' (expected free, equal, classical or custom)");
}

std::string to_string(PairPreset preset) {
  switch (preset) {
    case PairPreset::free: return "free";
    case PairPreset::equal: return "equal";
    case PairPreset::classical: return "classical";
    case PairPreset::custom: return "custom";
  }
  return "?";
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

CMatrix gue_increment(std::size_t n, Rng& rng) {
  const auto N = static_cast<Eigen::Index>(n);
  const double dn = static_cast<double>(n);
  std::normal_distribution<double> diag(0.0, 1.0 / std::sqrt(dn));
  std::normal_distribution<double> off(0.0, 1.0 / std::sqrt(2.0 * dn));
  CMatrix g(N, N);
  for (Eigen::Index j = 0; j < N; ++j) {
    g(j, j) = diag(rng);
    for (Eigen::Index i = j + 1; i < N; ++i) {
      const double re = off(rng);
      const double im = off(rng);
      g(i, j) = {re, im};
      g(j, i) = {re, -im};
    }
  }
  return g;
}

CMatrix unitary_increment(const CMatrix& g, double delta) {
  const std::complex<double> i(0.0, 1.0);
  const CMatrix x = std::sqrt(delta) * g;
  const CMatrix x2 = x * x;
  const CMatrix id = CMatrix::Identity(g.rows(), g.cols());
  const CMatrix num = id + 0.5 * i * x - x2 / 12.0;
  const CMatrix den = id - 0.5 * i * x - x2 / 12.0;
  return den.partialPivLu().solve(num);
}

double unitarity_defect(const CMatrix& u) {
  return (u.adjoint() * u - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

UnitaryBrownianMotion::UnitaryBrownianMotion(std::size_t n, double delta, std::size_t reorth_every)
    : u_(CMatrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n))),
      delta_(delta),
      reorth_every_(std::max<std::size_t>(reorth_every, 1)) {
  if (n < 2) throw ValidationError("UnitaryBrownianMotion: N must be >= 2");
  if (!(delta > 0.0)) throw ValidationError("UnitaryBrownianMotion: delta must be > 0");
}

void UnitaryBrownianMotion::step(double dt, Rng& rng) {
  u_ = u_ * unitary_increment(gue_increment(static_cast<std::size_t>(u_.rows()), rng), dt);
  ++steps_;
  if (steps_ % reorth_every_ == 0) {
    // One Newton-Schulz step towards the polar factor.
    const CMatrix id = CMatrix::Identity(u_.rows(), u_.cols());
    u_ = 0.5 * u_ * (3.0 * id - u_.adjoint() * u_);
  }
}

void UnitaryBrownianMotion::advance_to(double t, Rng& rng) {
  if (t < t_ - 1e-12) throw ValidationError("UnitaryBrownianMotion: cannot go back in time");
  const double slack = 1e-9 * delta_;
  while (t_ + delta_ <= t + slack) {
    step(delta_, rng);
    t_ += delta_;
  }
  if (t - t_ > slack) {
    step(t - t_, rng);
  }
  t_ = std::max(t_, t);
}

CMatrix evolve_unitary(std::size_t n, double t, double delta, Rng& rng) {
  UnitaryBrownianMotion bm(n, delta);
  bm.advance_to(t, rng);
  return bm.matrix();
}

CMatrix haar_unitary(std::size_t n, Rng& rng) {
  const auto N = static_cast<Eigen::Index>(n);
  std::normal_distribution<double> gauss(0.0, 1.0);
  CMatrix z(N, N);
  for (Eigen::Index j = 0; j < N; ++j) {
    for (Eigen::Index i = 0; i < N; ++i) z(i, j) = {gauss(rng), gauss(rng)};
  }
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR();
  for (Eigen::Index j = 0; j < N; ++j) {
    const std::complex<double> d = r(j, j);
    q.col(j) *= d / std::abs(d);
  }
  return q;
}

std::size_t achieved_rank(std::size_t n, double target) {
  if (!(target >= -1.0 && target <= 1.0)) throw ValidationError("trace target must lie in [-1, 1]");
  const double ones = static_cast<double>(n) * (1.0 + target) / 2.0;
  return static_cast<std::size_t>(std::ceil(ones - 1e-9));
}

namespace {

CMatrix diagonal_projection(const std::vector<int>& pattern) {
  const auto n = static_cast<Eigen::Index>(pattern.size());
  CMatrix p = CMatrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) p(i, i) = static_cast<double>(pattern[static_cast<std::size_t>(i)]);
  return p;
}

std::vector<int> leading_ones(std::size_t n, std::size_t k) {
  std::vector<int> v(n, 0);
  std::fill(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), 1);
  return v;
}

}  // namespace

ProjectionPair build_pair(std::size_t n, double alpha, double beta, PairPreset preset, Rng& rng,
                          const std::vector<double>& angles) {
  if (n < 2) throw ValidationError("build_pair: N must be >= 2");
  const std::size_t kp = achieved_rank(n, alpha);
  const std::size_t kq = achieved_rank(n, beta);
  const auto N = static_cast<Eigen::Index>(n);
  ProjectionPair out;
  switch (preset) {
    case PairPreset::free: {
      out.P = diagonal_projection(leading_ones(n, kp));
      const CMatrix v = haar_unitary(n, rng);
      out.Q = v * diagonal_projection(leading_ones(n, kq)) * v.adjoint();
      break;
    }
    case PairPreset::equal: {
      if (kp != kq) {
        std::ostringstream msg;
        msg << "build_pair: preset 'equal' needs equal traces, got ranks " << kp << " and " << kq;
        throw ValidationError(msg.str());
      }
      out.P = diagonal_projection(leading_ones(n, kp));
      out.Q = out.P;
      break;
    }
    case PairPreset::classical: {
      std::vector<int> pp = leading_ones(n, kp), qq = leading_ones(n, kq);
      std::shuffle(pp.begin(), pp.end(), rng);
      std::shuffle(qq.begin(), qq.end(), rng);
      out.P = diagonal_projection(pp);
      out.Q = diagonal_projection(qq);
      break;
    }
    case PairPreset::custom: {
      const std::size_t m = angles.size();
      if (2 * m > n || kp < m || kq < m || kp - m > n - 2 * m || kq - m > n - 2 * m) {
        std::ostringstream msg;
        msg << "build_pair: " << m << " principal angles do not fit N = " << n
            << " with ranks " << kp << " and " << kq;
        throw ValidationError(msg.str());
      }
      out.P = CMatrix::Zero(N, N);
      out.Q = CMatrix::Zero(N, N);
      for (std::size_t j = 0; j < m; ++j) {
        const auto i0 = static_cast<Eigen::Index>(2 * j);
        const double c = std::cos(angles[j]), s = std::sin(angles[j]);
        out.P(i0, i0) = 1.0;
        out.Q(i0, i0) = c * c;
        out.Q(i0, i0 + 1) = c * s;
        out.Q(i0 + 1, i0) = c * s;
        out.Q(i0 + 1, i0 + 1) = s * s;
      }
      const std::size_t tail = n - 2 * m;
      for (std::size_t j = 0; j < tail; ++j) {
        const auto i = static_cast<Eigen::Index>(2 * m + j);
        if (j < kp - m) out.P(i, i) = 1.0;
        if (j < kq - m) out.Q(i, i) = 1.0;
      }
      break;
    }
  }
  const CMatrix id = CMatrix::Identity(N, N);
  out.R = 2.0 * out.P - id;
  out.S = 2.0 * out.Q - id;
  out.alpha = (2.0 * static_cast<double>(kp) - static_cast<double>(n)) / static_cast<double>(n);
  out.beta = (2.0 * static_cast<double>(kq) - static_cast<double>(n)) / static_cast<double>(n);
  return out;
}

EmpiricalMoments empirical_moments(const ProjectionPair& pair, const CMatrix& u,
                                   std::size_t n_max) {
  const double dn = static_cast<double>(u.rows());
  const CMatrix rotated_s = u * pair.S * u.adjoint();
  const CMatrix rotated_q = u * pair.Q * u.adjoint();
  const CMatrix a = pair.R * rotated_s;
  const CMatrix b = pair.P * rotated_q;
  EmpiricalMoments out;
  out.symmetry.resize(n_max);
  out.projection.resize(n_max);
  CMatrix pa = a, pb = b;
  for (std::size_t n = 1; n <= n_max; ++n) {
    if (n > 1) {
      pa = pa * a;
      pb = pb * b;
    }
    const std::complex<double> fa = pa.trace() / dn;
    const std::complex<double> fb = pb.trace() / dn;
    out.max_imag = std::max({out.max_imag, std::abs(fa.imag()), std::abs(fb.imag())});
    out.symmetry[n - 1] = fa.real();
    out.projection[n - 1] = fb.real();
  }
  if (out.max_imag > 1e-8) {
    std::ostringstream msg;
    msg << "empirical_moments: imaginary part " << out.max_imag << " in a trace that must be real";
    throw NumericalHealthError(msg.str());
  }
  return out;
}

void EnsembleConfig::validate() const {
  if (n < 2) throw ValidationError("ensemble.N: must be >= 2");
  if (!(delta > 0.0)) throw ValidationError("ensemble.delta: must be > 0");
  if (!(alpha >= -1.0 && alpha <= 1.0)) throw ValidationError("ensemble.alpha: must lie in [-1, 1]");
  if (!(beta >= -1.0 && beta <= 1.0)) throw ValidationError("ensemble.beta: must lie in [-1, 1]");
  if (n_samples == 0) throw ValidationError("ensemble.n_samples: must be >= 1");
  if (n_moments == 0) throw ValidationError("ensemble.n_moments: must be >= 1");
  if (t_grid.empty()) throw ValidationError("ensemble.t_grid: must not be empty");
  for (double t : t_grid) {
    if (!(t >= 0.0)) throw ValidationError("ensemble.t_grid: times must be >= 0");
  }
}

void to_json(nlohmann::json& j, const EnsembleConfig& c) {
  j = nlohmann::json{{"N", c.n},
                     {"delta", c.delta},
                     {"alpha", c.alpha},
                     {"beta", c.beta},
                     {"preset", to_string(c.preset)},
                     {"angles", c.angles},
                     {"seed", c.seed},
                     {"n_samples", c.n_samples},
                     {"n_moments", c.n_moments},
                     {"t_grid", c.t_grid},
                     {"threads", c.threads},
                     {"reorth_every", c.reorth_every}};
}

void from_json(const nlohmann::json& j, EnsembleConfig& c) {
  c.n = j.value("N", c.n);
  c.delta = j.value("delta", c.delta);
  c.alpha = j.value("alpha", c.alpha);
  c.beta = j.value("beta", c.beta);
  if (j.contains("preset")) c.preset = parse_pair_preset(j.at("preset").get<std::string>());
  c.angles = j.value("angles", c.angles);
  c.seed = j.value("seed", c.seed);
  c.n_samples = j.value("n_samples", c.n_samples);
  c.n_moments = j.value("n_moments", c.n_moments);
  c.t_grid = j.value("t_grid", c.t_grid);
  c.threads = j.value("threads", c.threads);
  c.reorth_every = j.value("reorth_every", c.reorth_every);
}

const MonteCarloRow& MonteCarloResult::at(const std::string& process, double t,
                                          std::size_t n) const {
  for (const auto& r : rows) {
    if (r.process == process && r.n == n && std::abs(r.t - t) < 1e-12) return r;
  }
  throw ValidationError("MonteCarloResult: no row for " + process);
}

namespace {

struct SampleOutput {
  // [time][moment] for each process
  std::vector<std::vector<double>> symmetry;
  std::vector<std::vector<double>> projection;
  double binomial_defect = 0.0;
  double unitarity_defect = 0.0;
  double symmetry_defect = 0.0;
  double max_imag = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
};

SampleOutput run_sample(const EnsembleConfig& c, const std::vector<double>& times,
                        std::size_t index, const BinomialRelation& rel) {
  Rng rng(stream_seed(c.seed, index));
  const ProjectionPair pair = build_pair(c.n, c.alpha, c.beta, c.preset, rng, c.angles);
  const TraceParams achieved = TraceParams::from_traces(pair.alpha, pair.beta);
  SampleOutput out;
  out.alpha = pair.alpha;
  out.beta = pair.beta;
  const CMatrix id = CMatrix::Identity(pair.R.rows(), pair.R.cols());
  out.symmetry_defect = std::max((pair.R * pair.R - id).cwiseAbs().maxCoeff(),
                                 (pair.S * pair.S - id).cwiseAbs().maxCoeff());
  UnitaryBrownianMotion bm(c.n, c.delta, c.reorth_every);
  for (double t : times) {
    bm.advance_to(t, rng);
    out.unitarity_defect = std::max(out.unitarity_defect, unitarity_defect(bm.matrix()));
    EmpiricalMoments em = empirical_moments(pair, bm.matrix(), c.n_moments);
    out.max_imag = std::max(out.max_imag, em.max_imag);
    const std::vector<double> predicted =
        project_moments(MomentSequence{t, em.symmetry}, achieved, c.n_moments, rel);
    for (std::size_t n = 0; n < c.n_moments; ++n) {
      out.binomial_defect = std::max(out.binomial_defect, std::abs(predicted[n] - em.projection[n]));
    }
    out.symmetry.push_back(std::move(em.symmetry));
    out.projection.push_back(std::move(em.projection));
  }
  return out;
}

}  // namespace

MonteCarloResult monte_carlo(const EnsembleConfig& config, const BinomialRelation& relation) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  std::vector<double> times = config.t_grid;
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  std::vector<SampleOutput> samples(config.n_samples);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto worker = [&]() {
    for (std::size_t i = next++; i < config.n_samples && !failed; i = next++) {
      try {
        samples[i] = run_sample(config, times, i, relation);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  std::size_t n_threads = config.threads;
  if (n_threads == 0) n_threads = std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min(n_threads, config.n_samples);
#ifdef LIBERATION_OPENBLAS
  // Parallelism comes from the samples; nested BLAS threads would oversubscribe.
  if (n_threads > 1) openblas_set_num_threads(1);
#endif
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t k = 0; k < n_threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  MonteCarloResult result;
  result.alpha = samples.front().alpha;
  result.beta = samples.front().beta;
  const double ns = static_cast<double>(config.n_samples);
  for (const char* process : {"symmetry", "projection"}) {
    const bool sym = std::string(process) == "symmetry";
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
      for (std::size_t n = 0; n < config.n_moments; ++n) {
        // Fixed summation order: by sample index.
        double sum = 0.0;
        for (const auto& s : samples) sum += (sym ? s.symmetry : s.projection)[ti][n];
        const double mean = sum / ns;
        double ss = 0.0;
        for (const auto& s : samples) {
          const double dv = (sym ? s.symmetry : s.projection)[ti][n] - mean;
          ss += dv * dv;
        }
        const double se = config.n_samples > 1 ? std::sqrt(ss / (ns - 1.0) / ns) : 0.0;
        result.rows.push_back({process, times[ti], n + 1, mean, se, config.n_samples, config.n});
      }
    }
  }
  for (const auto& s : samples) {
    result.max_binomial_defect = std::max(result.max_binomial_defect, s.binomial_defect);
    result.max_unitarity_defect = std::max(result.max_unitarity_defect, s.unitarity_defect);
    result.max_symmetry_defect = std::max(result.max_symmetry_defect, s.symmetry_defect);
    result.max_imag = std::max(result.max_imag, s.max_imag);
  }
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

void write_monte_carlo_csv(std::ostream& os, const MonteCarloResult& result) {
  os << "process,t,n,mean,stderr,n_samples,N\n"
     << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (const auto& r : result.rows) {
    os << r.process << ',' << r.t << ',' << r.n << ',' << r.mean << ',' << r.stderr_ << ','
       << r.n_samples << ',' << r.dim << '\n';
  }
}

}  // namespace liberation
