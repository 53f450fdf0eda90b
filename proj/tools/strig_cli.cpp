// strig: sparse trigonometric polynomial recovery experiments.
//
// Subcommands: sweep, oversample, timing, noise, audit, recover.
// Exit codes: 0 success, 2 configuration error, 3 solver degeneracy abort.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "strig/analysis.hpp"
#include "strig/experiments.hpp"

namespace {

using namespace strig;

std::vector<Index> parse_index_list(const std::string& text) {
  std::vector<Index> out;
  const auto colon = text.find(':');
  if (colon != std::string::npos) {
    const long lo = std::stol(text.substr(0, colon));
    const long hi = std::stol(text.substr(colon + 1));
    if (lo < 0 || hi < lo) throw CLI::ValidationError("range", "bad range " + text);
    for (long v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  std::istringstream is(text);
  std::string field;
  while (std::getline(is, field, ',')) out.push_back(std::stol(field));
  if (out.empty()) throw CLI::ValidationError("range", "empty list");
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::istringstream is(text);
  std::string field;
  while (std::getline(is, field, ',')) out.push_back(std::stod(field));
  return out;
}

struct CommonFlags {
  std::string model = "fft";
  std::vector<std::string> algs;
  std::string mrange;
  std::string coeff = "gaussian";
  std::string out;
  bool dat = false;
  int dim = 1;
};

void add_common(CLI::App* cmd, ExperimentConfig& cfg, CommonFlags& flags) {
  cmd->add_option("--dim", flags.dim, "Ambient dimension (experiments are univariate)");
  cmd->add_option("--gamma", cfg.d_size, "Spectrum size D; Gamma = {-D/2,...,D/2-1}");
  cmd->add_option("--grid", cfg.grid, "Discrete grid size m (default: D)");
  cmd->add_option("--model", flags.model, "Sampling model: fft | nfft | gaussian")
      ->check(CLI::IsMember({"fft", "nfft", "gaussian"}));
  cmd->add_flag("--with-replacement", [&cfg](std::int64_t) { cfg.discrete_distinct = false; },
                "Discrete model: sample grid points with replacement");
  cmd->add_option("--alg", flags.algs, "Algorithms: omp | mp | thresholding | bp");
  cmd->add_option("--mrange", flags.mrange, "Sparsities, e.g. 1:40 or 2,4,8");
  cmd->add_option("--samples", cfg.n_samples, "Number of samples N");
  cmd->add_option("--trials", cfg.trials, "Monte-Carlo trials per configuration");
  cmd->add_option("--seed", cfg.seed, "Base seed (mandatory)")->required();
  cmd->add_option("--coeff", flags.coeff, "Coefficient style: gaussian | unimodular")
      ->check(CLI::IsMember({"gaussian", "unimodular"}));
  cmd->add_flag("--real", cfg.real_mode, "Real-valued coefficient model");
  cmd->add_option("--threads", cfg.threads, "Worker threads (results are thread-count independent)");
  cmd->add_flag("--times", cfg.with_times, "Record wall-clock times (not byte-reproducible)");
  cmd->add_option("--out", flags.out, "Output CSV path (default: stdout)");
  cmd->add_flag("--dat", flags.dat, "Also write a gnuplot-ready .dat next to --out");
  cmd->add_option("--bp-feas-tol", [&cfg](const CLI::results_t& r) {
        cfg.tol.bp_feas_tol_rel = std::stod(r[0]); return true; },
      "BP feasibility tolerance (relative to ||f||)");
  cmd->add_option("--bp-gap-tol", [&cfg](const CLI::results_t& r) {
        cfg.tol.bp_gap_tol = std::stod(r[0]); return true; },
      "BP fixed-point residual tolerance");
  cmd->add_option("--bp-max-iter", [&cfg](const CLI::results_t& r) {
        cfg.tol.bp_max_iter = std::stol(r[0]); return true; },
      "BP iteration cap (default 50 D)");
  cmd->add_option("--ls-tol", [&cfg](const CLI::results_t& r) {
        cfg.tol.ls_tolerance = std::stod(r[0]); return true; },
      "LSQR normal-equation tolerance");
  cmd->add_option("--success-tol", [&cfg](const CLI::results_t& r) {
        cfg.tol.success_tol = std::stod(r[0]); return true; },
      "Exact-recovery threshold (relative max-norm)");
}

void finish_common(const CommonFlags& flags, ExperimentConfig& cfg) {
  if (flags.dim != 1)
    throw std::invalid_argument("experiments run with --dim 1; higher dimensions are library-level only");
  if (flags.model == "fft") cfg.model = ModelKind::discrete;
  else if (flags.model == "nfft") cfg.model = ModelKind::continuous;
  else cfg.model = ModelKind::gaussian;
  cfg.coeff = flags.coeff == "unimodular" ? CoefficientStyle::unimodular_phase
                                          : CoefficientStyle::complex_gaussian;
  if (!flags.mrange.empty()) cfg.m_range = parse_index_list(flags.mrange);
  cfg.algorithms.clear();
  for (const std::string& name : flags.algs) {
    const auto alg = algorithm_from_name(name);
    if (!alg) throw std::invalid_argument("unknown algorithm: " + name);
    cfg.algorithms.push_back(*alg);
  }
  if (cfg.algorithms.empty()) cfg.algorithms = {Algorithm::omp};
}

template <typename Result>
void emit_result(const Result& result, const CommonFlags& flags) {
  if (flags.out.empty()) {
    write_csv(std::cout, result);
  } else {
    std::ofstream os(flags.out, std::ios::binary);
    if (!os) throw std::invalid_argument("cannot open output file: " + flags.out);
    write_csv(os, result);
    if (flags.dat) {
      std::ofstream dat(flags.out + ".dat", std::ios::binary);
      write_dat(dat, result);
    }
  }
}

struct RecoverFlags {
  std::string in, out, alg = "omp";
  int dim = 1;
  Index gamma_size = 0;
  int order = 0;
  Index sparsity = 0;
  double restol = 0.0;
  bool real_mode = false;
};

int run_recover(const RecoverFlags& flags) {
  std::ifstream is(flags.in);
  if (!is) throw std::invalid_argument("cannot open input file: " + flags.in);
  const SampleTable table = read_samples_csv(is, flags.dim);

  std::shared_ptr<const FrequencySet> gamma;
  if (flags.dim == 1) {
    if (flags.gamma_size < 2) throw std::invalid_argument("recover: --gamma D required");
    gamma = std::make_shared<FrequencySet>(FrequencySet::centered_line(flags.gamma_size));
  } else {
    if (flags.order < 0) throw std::invalid_argument("recover: --order q required for --dim > 1");
    gamma = std::make_shared<FrequencySet>(FrequencySet::cube(flags.dim, flags.order));
  }

  const SamplingSet x(table.points, SamplingModel::continuous_cube(flags.dim), 0);
  const MeasurementOperator op(x, gamma);
  const auto alg = algorithm_from_name(flags.alg);
  if (!alg) throw std::invalid_argument("unknown algorithm: " + flags.alg);

  StoppingRule stop = flags.sparsity > 0
                          ? StoppingRule::sparsity(flags.sparsity)
                          : StoppingRule::residual(
                                (flags.restol > 0 ? flags.restol : 1e-8) * table.values.norm());

  Eigen::VectorXcd coeffs;
  switch (*alg) {
    case Algorithm::omp:
      coeffs = omp(op, table.values, stop).coefficients;
      break;
    case Algorithm::mp:
      coeffs = mp(op, table.values, stop).coefficients;
      break;
    case Algorithm::thresholding:
      if (flags.sparsity < 1)
        throw std::invalid_argument("recover: thresholding needs --sparsity");
      coeffs = thresholding(op, table.values, flags.sparsity).coefficients;
      break;
    case Algorithm::bp: {
      const BPSolution sol = solve_bp(BPProblem(op, table.values, flags.real_mode));
      coeffs = debias_on_support(op, sol.coefficients, table.values);
      break;
    }
  }

  if (flags.out.empty()) {
    write_coefficients_csv(std::cout, *gamma, coeffs);
  } else {
    std::ofstream os(flags.out, std::ios::binary);
    if (!os) throw std::invalid_argument("cannot open output file: " + flags.out);
    write_coefficients_csv(os, *gamma, coeffs);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sparse trigonometric polynomial recovery toolkit"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  CommonFlags flags;
  std::string dsweep, sigma2;
  RecoverFlags rec;

  auto* sweep = app.add_subcommand("sweep", "Success-rate sweep over sparsity");
  add_common(sweep, cfg, flags);

  auto* oversample = app.add_subcommand(
      "oversample", "Smallest oversampling factor reaching a target success rate");
  add_common(oversample, cfg, flags);
  oversample->add_option("--dsweep", dsweep, "Dimensions to probe, e.g. 64,256,1024")->required();
  oversample->add_option("--mfixed", cfg.m_fixed, "Fixed sparsity M");
  oversample->add_option("--target", cfg.target_rate, "Target success rate (default 0.9)");

  auto* timing = app.add_subcommand("timing", "Wall-clock medians for the solver variants");
  add_common(timing, cfg, flags);
  timing->add_option("--dsweep", dsweep, "Dimensions, e.g. 128,256,...,8192")->required();

  auto* noise = app.add_subcommand("noise", "OMP under additive complex Gaussian noise");
  add_common(noise, cfg, flags);
  noise->add_option("--sigma2", sigma2, "Noise variances, e.g. 0,0.05,0.2")->required();

  auto* audit = app.add_subcommand("audit", "Coherence and eigenvalue-band audits");
  add_common(audit, cfg, flags);
  audit->add_option("--eps", cfg.eps, "Bound failure probability (default 0.1)");
  audit->add_option("--delta", cfg.delta, "Eigenvalue band half-width (default 0.5)");

  auto* recover = app.add_subcommand("recover", "One-shot recovery from a samples CSV");
  recover->add_option("--in", rec.in, "Input samples CSV (x_1..x_d,re,im rows)")->required();
  recover->add_option("--dim", rec.dim, "Point dimension");
  recover->add_option("--gamma", rec.gamma_size, "Spectrum size D (dim 1)");
  recover->add_option("--order", rec.order, "Cube order q (dim > 1)");
  recover->add_option("--alg", rec.alg, "omp | mp | thresholding | bp");
  recover->add_option("--sparsity", rec.sparsity, "Stop after this many selections");
  recover->add_option("--restol", rec.restol, "Relative residual stopping tolerance");
  recover->add_flag("--real", rec.real_mode, "Real-coefficient BP");
  recover->add_option("--out", rec.out, "Output coefficients CSV (default: stdout)");

  try {
    app.parse(argc, argv);

    if (recover->parsed()) return run_recover(rec);

    finish_common(flags, cfg);
    if (sweep->parsed()) {
      emit_result(run_success_sweep(cfg), flags);
    } else if (oversample->parsed()) {
      cfg.d_sweep = parse_index_list(dsweep);
      emit_result(run_oversampling_search(cfg), flags);
    } else if (timing->parsed()) {
      cfg.d_sweep = parse_index_list(dsweep);
      emit_result(run_timing(cfg), flags);
    } else if (noise->parsed()) {
      cfg.sigma2_list = parse_double_list(sigma2);
      emit_result(run_noise(cfg), flags);
    } else if (audit->parsed()) {
      emit_result(run_coherence_audit(cfg), flags);
    }
    return 0;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const strig::DegenerateColumnError& e) {
    std::cerr << "solver degeneracy: " << e.what() << '\n';
    return 3;
  } catch (const strig::SingularSystemError& e) {
    std::cerr << "solver degeneracy: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
