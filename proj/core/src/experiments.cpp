#include "strig/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "strig/analysis.hpp"
#include "strig/csv.hpp"

namespace strig {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// FNV-1a over the canonical config string, printed as 16 hex digits.
std::string hash_hex(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string canonical_config(const ExperimentConfig& cfg, const char* experiment) {
  std::ostringstream os;
  os << experiment << "|D=" << cfg.d_size << "|model=" << model_name(cfg.model)
     << "|grid=" << cfg.grid << "|distinct=" << cfg.discrete_distinct
     << "|coeff=" << (cfg.coeff == CoefficientStyle::complex_gaussian ? "gaussian" : "unimodular")
     << "|real=" << cfg.real_mode << "|algs=";
  for (Algorithm a : cfg.algorithms) os << algorithm_name(a) << '+';
  os << "|m=";
  for (Index m : cfg.m_range) os << m << '+';
  os << "|N=" << cfg.n_samples << "|trials=" << cfg.trials << "|seed=" << cfg.seed
     << "|target=" << fmt_double(cfg.target_rate) << "|dsweep=";
  for (Index d : cfg.d_sweep) os << d << '+';
  os << "|mfixed=" << cfg.m_fixed << "|sigma2=";
  for (double s : cfg.sigma2_list) os << fmt_double(s) << '+';
  os << "|eps=" << fmt_double(cfg.eps) << "|delta=" << fmt_double(cfg.delta)
     << "|feas=" << (cfg.tol.bp_feas_tol_rel ? fmt_double(*cfg.tol.bp_feas_tol_rel) : "-")
     << "|gap=" << (cfg.tol.bp_gap_tol ? fmt_double(*cfg.tol.bp_gap_tol) : "-")
     << "|bpiter=" << (cfg.tol.bp_max_iter ? std::to_string(*cfg.tol.bp_max_iter) : "-")
     << "|lstol=" << (cfg.tol.ls_tolerance ? fmt_double(*cfg.tol.ls_tolerance) : "-")
     << "|successtol=" << (cfg.tol.success_tol ? fmt_double(*cfg.tol.success_tol) : "-");
  return os.str();
}

// Trials are embarrassingly parallel; aggregation is per-trial slots, so the
// result is independent of the worker count and schedule.
void parallel_for(Index count, int threads, const std::function<void(Index)>& body) {
  threads = std::max(1, threads);
  if (threads == 1 || count <= 1) {
    for (Index i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<Index> next{0};
  std::mutex err_mutex;
  std::exception_ptr error;
  auto worker = [&] {
    for (;;) {
      const Index i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int spawn = static_cast<int>(std::min<Index>(threads, count));
  pool.reserve(static_cast<std::size_t>(spawn));
  for (int t = 0; t < spawn; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

BpOptions bp_options(const ExperimentConfig& cfg) {
  BpOptions opts;
  if (cfg.tol.bp_feas_tol_rel) opts.feas_tol_rel = *cfg.tol.bp_feas_tol_rel;
  if (cfg.tol.bp_gap_tol) opts.gap_tol = *cfg.tol.bp_gap_tol;
  if (cfg.tol.bp_max_iter) opts.max_iter = *cfg.tol.bp_max_iter;
  return opts;
}

LsqrOptions ls_options(const ExperimentConfig& cfg) {
  LsqrOptions opts;
  if (cfg.tol.ls_tolerance) opts.tolerance = *cfg.tol.ls_tolerance;
  return opts;
}

double success_tol(const ExperimentConfig& cfg) {
  return cfg.tol.success_tol ? *cfg.tol.success_tol : 1e-4;
}

long effective_grid(const ExperimentConfig& cfg, Index d_size) {
  return cfg.grid > 0 ? cfg.grid : static_cast<long>(d_size);
}

}  // namespace

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::omp: return "omp";
    case Algorithm::mp: return "mp";
    case Algorithm::thresholding: return "thresholding";
    case Algorithm::bp: return "bp";
  }
  return "?";
}

std::optional<Algorithm> algorithm_from_name(const std::string& name) {
  if (name == "omp") return Algorithm::omp;
  if (name == "mp") return Algorithm::mp;
  if (name == "thresholding" || name == "thresh") return Algorithm::thresholding;
  if (name == "bp") return Algorithm::bp;
  return std::nullopt;
}

std::string model_name(ModelKind kind) {
  switch (kind) {
    case ModelKind::continuous: return "nfft";
    case ModelKind::discrete: return "fft";
    case ModelKind::gaussian: return "gaussian";
  }
  return "?";
}

Instance make_instance(const ExperimentConfig& cfg, Index d_size, Index m,
                       Index n, Index trial) {
  if (d_size < 2 || d_size % 2 != 0)
    throw std::invalid_argument("make_instance: D must be even and >= 2");
  if (n < 1) throw std::invalid_argument("make_instance: need N >= 1");

  Instance inst;
  inst.gamma = std::make_shared<FrequencySet>(FrequencySet::centered_line(d_size));

  const auto u = [](Index v) { return static_cast<std::uint64_t>(v); };
  Rng signal_rng(derive_seed(cfg.seed, {u(d_size), u(m), u(trial), kStreamSignal}));
  SparseCoefficients truth =
      random_sparse_coefficients(inst.gamma, m, cfg.coeff, signal_rng);
  if (cfg.real_mode && m > 0) {
    // Real coefficient model: keep the support draw, replace values by their
    // real parts (sign only for the unimodular style).
    Eigen::VectorXcd values = truth.values();
    for (Index i = 0; i < values.size(); ++i) {
      double re = values[i].real();
      if (cfg.coeff == CoefficientStyle::unimodular_phase) re = re >= 0.0 ? 1.0 : -1.0;
      while (re == 0.0) re = signal_rng.normal();
      values[i] = Complex(re, 0.0);
    }
    truth = SparseCoefficients(inst.gamma, truth.support(), std::move(values));
  }
  inst.truth = std::make_unique<SparseCoefficients>(std::move(truth));

  const std::uint64_t points_seed =
      derive_seed(cfg.seed, {u(d_size), u(m), u(trial), kStreamPoints});
  switch (cfg.model) {
    case ModelKind::continuous:
      inst.op = std::make_unique<MeasurementOperator>(
          draw_continuous(1, n, points_seed), inst.gamma);
      break;
    case ModelKind::discrete: {
      const long grid = effective_grid(cfg, d_size);
      SamplingSet x = cfg.discrete_distinct
                          ? draw_discrete_subset(grid, 1, n, points_seed)
                          : draw_discrete(grid, 1, n, points_seed);
      inst.op = std::make_unique<MeasurementOperator>(std::move(x), inst.gamma);
      break;
    }
    case ModelKind::gaussian:
      inst.op = std::make_unique<DenseOperator>(
          draw_gaussian_matrix(n, d_size, points_seed));
      break;
  }
  inst.samples = inst.op->apply(inst.truth->dense());
  return inst;
}

bool exact_recovery(const Eigen::VectorXcd& recovered,
                    const Eigen::VectorXcd& truth, double tol) {
  const double peak = truth.cwiseAbs().maxCoeff();
  if (peak == 0.0) return recovered.cwiseAbs().maxCoeff() == 0.0;
  return (recovered - truth).cwiseAbs().maxCoeff() <= tol * peak;
}

Eigen::VectorXcd run_algorithm(Algorithm alg, const Instance& inst, Index m,
                               const ExperimentConfig& cfg) {
  const Eigen::VectorXcd& f = inst.samples;
  switch (alg) {
    case Algorithm::omp:
      return omp(*inst.op, f, StoppingRule::sparsity(m), LsBackend::qr_update).coefficients;
    case Algorithm::mp:
      return mp(*inst.op, f,
                StoppingRule::either(inst.op->rows(), 1e-8 * f.norm()))
          .coefficients;
    case Algorithm::thresholding:
      return thresholding(*inst.op, f, m).coefficients;
    case Algorithm::bp: {
      const BPSolution sol =
          solve_bp(BPProblem(*inst.op, f, cfg.real_mode), bp_options(cfg));
      return debias_on_support(*inst.op, sol.coefficients, f);
    }
  }
  throw std::logic_error("run_algorithm: unknown algorithm");
}

SweepResult run_success_sweep(const ExperimentConfig& cfg) {
  if (cfg.n_samples < 1)
    throw std::invalid_argument("run_success_sweep: N must be set");
  if (cfg.trials < 1) throw std::invalid_argument("run_success_sweep: trials >= 1");
  if (cfg.algorithms.empty())
    throw std::invalid_argument("run_success_sweep: no algorithms selected");

  SweepResult result;
  result.config_hash = hash_hex(canonical_config(cfg, "sweep"));
  const Index n = cfg.n_samples;
  const double tol = success_tol(cfg);

  for (Index m : cfg.m_range) {
    const bool instance_ok = m <= cfg.d_size;
    std::vector<std::vector<std::uint8_t>> success(
        cfg.algorithms.size(), std::vector<std::uint8_t>(static_cast<std::size_t>(cfg.trials), 0));
    std::vector<std::vector<double>> times(
        cfg.algorithms.size(), std::vector<double>(static_cast<std::size_t>(cfg.trials), 0.0));

    auto greedy_skipped = [&](Algorithm a) {
      return a != Algorithm::bp && m > n;
    };

    if (instance_ok) {
      parallel_for(cfg.trials, cfg.threads, [&](Index t) {
        const Instance inst = make_instance(cfg, cfg.d_size, m, n, t);
        const Eigen::VectorXcd truth = inst.truth->dense();
        for (std::size_t ai = 0; ai < cfg.algorithms.size(); ++ai) {
          const Algorithm alg = cfg.algorithms[ai];
          if (greedy_skipped(alg)) continue;
          const auto t0 = Clock::now();
          const Eigen::VectorXcd rec = run_algorithm(alg, inst, m, cfg);
          if (cfg.with_times) times[ai][static_cast<std::size_t>(t)] = seconds_since(t0);
          success[ai][static_cast<std::size_t>(t)] = exact_recovery(rec, truth, tol) ? 1 : 0;
        }
      });
    }

    for (std::size_t ai = 0; ai < cfg.algorithms.size(); ++ai) {
      SweepRow row;
      row.alg = cfg.algorithms[ai];
      row.d = cfg.d_size;
      row.n = n;
      row.m = m;
      row.trials = cfg.trials;
      row.skipped = !instance_ok || greedy_skipped(row.alg);
      if (!row.skipped) {
        for (auto s : success[ai]) row.successes += s;
        if (cfg.with_times) {
          double total = 0.0;
          for (double v : times[ai]) total += v;
          row.mean_time_seconds = total / double(cfg.trials);
        }
      }
      result.rows.push_back(row);
    }
  }
  return result;
}

OversampleResult run_oversampling_search(const ExperimentConfig& cfg) {
  if (cfg.d_sweep.empty())
    throw std::invalid_argument("run_oversampling_search: no dimensions given");
  if (cfg.m_fixed < 1)
    throw std::invalid_argument("run_oversampling_search: need m >= 1");

  OversampleResult result;
  result.config_hash = hash_hex(canonical_config(cfg, "oversample"));
  const double tol = success_tol(cfg);

  for (Algorithm alg : cfg.algorithms) {
    for (Index d : cfg.d_sweep) {
      const Index m = cfg.m_fixed;
      auto rate = [&](Index n) {
        std::vector<std::uint8_t> ok(static_cast<std::size_t>(cfg.trials), 0);
        parallel_for(cfg.trials, cfg.threads, [&](Index t) {
          const Instance inst = make_instance(cfg, d, m, n, t);
          const Eigen::VectorXcd rec = run_algorithm(alg, inst, m, cfg);
          ok[static_cast<std::size_t>(t)] =
              exact_recovery(rec, inst.truth->dense(), tol) ? 1 : 0;
        });
        Index hits = 0;
        for (auto v : ok) hits += v;
        return double(hits) / double(cfg.trials);
      };

      OversampleRow row;
      row.alg = alg;
      row.d = d;
      row.m = m;
      row.trials = cfg.trials;
      row.target_rate = cfg.target_rate;
      if (rate(d) < cfg.target_rate) {
        row.saturated = true;
        row.n_star = d;
      } else {
        Index lo = std::max<Index>(1, m), hi = d;
        while (lo < hi) {
          const Index mid = lo + (hi - lo) / 2;
          if (rate(mid) >= cfg.target_rate)
            hi = mid;
          else
            lo = mid + 1;
        }
        row.n_star = lo;
      }
      row.theta = double(row.n_star) / double(m);
      result.rows.push_back(row);
    }
  }
  return result;
}

TimingResult run_timing(const ExperimentConfig& cfg) {
  if (cfg.d_sweep.empty())
    throw std::invalid_argument("run_timing: no dimensions given");

  TimingResult result;
  result.config_hash = hash_hex(canonical_config(cfg, "timing"));
  constexpr int kRuns = 5;
  constexpr double kMinSample = 0.01;  // batch short solves up to ~10 ms

  ExperimentConfig local = cfg;
  local.model = ModelKind::discrete;  // timing sweep is the FFT experiment
  local.threads = 1;                  // timing forces single-threaded solves

  for (Index d : cfg.d_sweep) {
    const Index m = std::max<Index>(1, static_cast<Index>(std::sqrt(double(d)) / 8.0));
    const Index n = 2 * m * static_cast<Index>(std::llround(std::log2(double(d))));
    local.grid = static_cast<long>(d);

    struct Variant {
      std::string name;
      std::function<void(const Instance&, const DenseOperator&)> solve;
    };
    const std::vector<Variant> variants = {
        {"omp-qr-explicit",
         [&](const Instance& inst, const DenseOperator& explicit_op) {
           omp(explicit_op, inst.samples, StoppingRule::sparsity(m), LsBackend::qr_update);
         }},
        {"omp-lsqr-fft",
         [&](const Instance& inst, const DenseOperator&) {
           omp(*inst.op, inst.samples, StoppingRule::sparsity(m), LsBackend::iterative_ls,
               ls_options(local));
         }},
        {"bp",
         [&](const Instance& inst, const DenseOperator&) {
           solve_bp(BPProblem(*inst.op, inst.samples), bp_options(local));
         }},
    };

    std::vector<std::vector<double>> samples(variants.size());
    for (int run = -1; run < kRuns; ++run) {  // run -1 is the warm-up
      const Instance inst = make_instance(local, d, m, n, std::max<Index>(0, run));
      const DenseOperator explicit_op(inst.op->dense());
      for (std::size_t vi = 0; vi < variants.size(); ++vi) {
        if (run < 0) {
          const auto t0 = Clock::now();
          variants[vi].solve(inst, explicit_op);
          (void)seconds_since(t0);
          continue;
        }
        // Estimate once per (d, variant) from the first measured run.
        const auto est0 = Clock::now();
        variants[vi].solve(inst, explicit_op);
        const double est = std::max(seconds_since(est0), 1e-9);
        const int reps = static_cast<int>(std::min(10000.0, std::max(1.0, std::ceil(kMinSample / est))));
        const auto t0 = Clock::now();
        for (int rep = 0; rep < reps; ++rep) variants[vi].solve(inst, explicit_op);
        samples[vi].push_back(seconds_since(t0) / double(reps));
      }
    }

    for (std::size_t vi = 0; vi < variants.size(); ++vi) {
      std::sort(samples[vi].begin(), samples[vi].end());
      TimingRow row;
      row.variant = variants[vi].name;
      row.d = d;
      row.m = m;
      row.n = n;
      row.runs = kRuns;
      row.median_seconds = samples[vi][samples[vi].size() / 2];
      result.rows.push_back(row);
    }
  }
  return result;
}

NoiseResult run_noise(const ExperimentConfig& cfg) {
  if (cfg.sigma2_list.empty())
    throw std::invalid_argument("run_noise: no noise variances given");
  if (cfg.n_samples < 1) throw std::invalid_argument("run_noise: N must be set");

  NoiseResult result;
  result.config_hash = hash_hex(canonical_config(cfg, "noise"));
  const Index n = cfg.n_samples;
  const auto u = [](Index v) { return static_cast<std::uint64_t>(v); };

  for (Index m : cfg.m_range) {
    for (double sigma2 : cfg.sigma2_list) {
      if (sigma2 < 0)
        throw std::invalid_argument("run_noise: noise variance must be >= 0");
      std::vector<NoiseRow> rows(static_cast<std::size_t>(cfg.trials));
      parallel_for(cfg.trials, cfg.threads, [&](Index t) {
        const Instance inst = make_instance(cfg, cfg.d_size, m, n, t);
        // The noise direction is fixed per trial and scaled by sigma, so
        // PSNR is exactly monotone across the variance list.
        Rng noise_rng(derive_seed(cfg.seed, {u(cfg.d_size), u(m), u(t), kStreamNoise}));
        Eigen::VectorXcd g(n);
        for (Index j = 0; j < n; ++j) g[j] = noise_rng.complex_normal();
        const Eigen::VectorXcd noise = std::sqrt(sigma2 / 2.0) * g;
        const Eigen::VectorXcd noisy = inst.samples + noise;

        const RecoveryOutcome out =
            omp(*inst.op, noisy, StoppingRule::sparsity(m), LsBackend::qr_update);

        NoiseRow row;
        row.trial = t;
        row.m = m;
        row.sigma2 = sigma2;
        row.support_recovered = out.support == inst.truth->support();
        row.max_coeff_error =
            (out.coefficients - inst.truth->dense()).cwiseAbs().maxCoeff();
        const double peak = inst.samples.cwiseAbs2().maxCoeff();
        const double mean_sq_noise = noise.squaredNorm() / double(n);
        row.psnr_db = mean_sq_noise > 0.0
                          ? 10.0 * std::log10(peak / mean_sq_noise)
                          : std::numeric_limits<double>::infinity();
        rows[static_cast<std::size_t>(t)] = row;
      });
      for (auto& row : rows) result.rows.push_back(row);
    }
  }
  return result;
}

AuditResult run_coherence_audit(const ExperimentConfig& cfg) {
  if (cfg.m_range.empty())
    throw std::invalid_argument("run_coherence_audit: sparsity required");
  if (cfg.model == ModelKind::gaussian)
    throw std::invalid_argument("run_coherence_audit: Fourier models only");
  const Index m = cfg.m_range.front();
  const Index d = cfg.d_size;
  auto gamma = std::make_shared<FrequencySet>(FrequencySet::centered_line(d));
  const long grid = effective_grid(cfg, d);
  const auto u = [](Index v) { return static_cast<std::uint64_t>(v); };

  AuditResult result;
  result.config_hash = hash_hex(canonical_config(cfg, "audit"));

  const SampleBoundTable bounds = sample_bounds(
      *gamma, m, 1.0, cfg.eps, cfg.model,
      cfg.model == ModelKind::discrete ? std::optional<long>(grid) : std::nullopt);
  const Index n_coh =
      cfg.n_samples > 0 ? cfg.n_samples : static_cast<Index>(bounds.n_coherence);
  const Index n_eig = cfg.n_samples > 0
                          ? cfg.n_samples
                          : static_cast<Index>(eig_bound_samples(m, cfg.delta, cfg.eps));

  // The bounds are stated for i.i.d. draws, so the discrete audit samples
  // with replacement regardless of the sweep-side default.
  auto draw_points = [&](Index n, std::uint64_t seed) {
    return cfg.model == ModelKind::discrete ? draw_discrete(grid, 1, n, seed)
                                            : draw_continuous(1, n, seed);
  };

  {
    std::vector<std::uint8_t> bad(static_cast<std::size_t>(cfg.trials), 0);
    parallel_for(cfg.trials, cfg.threads, [&](Index t) {
      const MeasurementOperator op(
          draw_points(n_coh, derive_seed(cfg.seed, {u(d), u(m), u(t), kStreamPoints})),
          gamma);
      bad[static_cast<std::size_t>(t)] = check_omp_uniform(coherence(op), m) ? 0 : 1;
    });
    AuditRow row;
    row.check = "coherence";
    row.model = cfg.model;
    row.d = d;
    row.m = m;
    row.n = n_coh;
    row.trials = cfg.trials;
    for (auto v : bad) row.violations += v;
    row.eps = cfg.eps;
    row.fraction = double(row.violations) / double(cfg.trials);
    result.rows.push_back(row);
  }

  {
    std::vector<std::uint8_t> bad(static_cast<std::size_t>(cfg.trials), 0);
    parallel_for(cfg.trials, cfg.threads, [&](Index t) {
      const MeasurementOperator op(
          draw_points(n_eig, derive_seed(cfg.seed, {u(d), u(m), u(t), kStreamProbe})),
          gamma);
      Rng signal_rng(derive_seed(cfg.seed, {u(d), u(m), u(t), kStreamSignal}));
      const SparseCoefficients draw = random_sparse_coefficients(
          gamma, m, CoefficientStyle::complex_gaussian, signal_rng);
      const SupportOperator sub(op, draw.support());
      const EigBoundReport rep = gram_eigs(sub);
      bad[static_cast<std::size_t>(t)] =
          (rep.lambda_min < 1.0 - cfg.delta || rep.lambda_max > 1.0 + cfg.delta) ? 1 : 0;
    });
    AuditRow row;
    row.check = "eigenvalue";
    row.model = cfg.model;
    row.d = d;
    row.m = m;
    row.n = n_eig;
    row.trials = cfg.trials;
    for (auto v : bad) row.violations += v;
    row.eps = cfg.eps;
    row.fraction = double(row.violations) / double(cfg.trials);
    result.rows.push_back(row);
  }
  return result;
}

}  // namespace strig
