// Seeded Monte-Carlo experiment harness: success-rate sweeps, oversampling
// searches, timing comparisons, noise studies, and coherence/eigenvalue
// audits, all reproducible bit-for-bit from (config, seed).

#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "strig/basis_pursuit.hpp"
#include "strig/greedy.hpp"
#include "strig/measurement.hpp"

namespace strig {

enum class Algorithm { omp, mp, thresholding, bp };

const char* algorithm_name(Algorithm a);
std::optional<Algorithm> algorithm_from_name(const std::string& name);

struct ToleranceOverrides {
  std::optional<double> bp_feas_tol_rel;
  std::optional<double> bp_gap_tol;
  std::optional<Index> bp_max_iter;
  std::optional<double> ls_tolerance;
  std::optional<double> success_tol;  // default 1e-4 (relative max-norm)
};

struct ExperimentConfig {
  // Instance space. Experiments are univariate: Gamma = {-D/2, ..., D/2-1}.
  Index d_size = 100;
  ModelKind model = ModelKind::discrete;
  long grid = 0;                  // discrete grid m; 0 means m = D
  bool discrete_distinct = true;  // draw grid points without replacement
  CoefficientStyle coeff = CoefficientStyle::complex_gaussian;
  bool real_mode = false;         // real-valued coefficients (BP real mode)

  // Run shape.
  std::vector<Algorithm> algorithms{Algorithm::omp};
  std::vector<Index> m_range{1};
  Index n_samples = 0;
  Index trials = 100;
  std::uint64_t seed = 1;

  // Experiment-specific knobs.
  double target_rate = 0.9;        // oversample: success level for N*
  std::vector<Index> d_sweep;      // oversample/timing dimensions
  Index m_fixed = 8;               // oversample sparsity
  std::vector<double> sigma2_list; // noise variances
  double eps = 0.1;                // audit failure probability
  double delta = 0.5;              // audit eigenvalue band half-width

  ToleranceOverrides tol;
  int threads = 1;
  bool with_times = false;  // sweep rows carry measured times (not reproducible)
};

/// One fully seeded problem instance. All algorithms of a trial share it.
struct Instance {
  std::shared_ptr<const FrequencySet> gamma;
  std::unique_ptr<SparseCoefficients> truth;
  std::unique_ptr<LinearOperator> op;
  Eigen::VectorXcd samples;  // noise-free F_X c
};

/// Deterministic instance generation under seed rule v1: the signal and point
/// streams are seeded by hash(seed, D, M, trial, stream). Point draws nest:
/// the first n points coincide for any two draws differing only in n.
Instance make_instance(const ExperimentConfig& cfg, Index d_size, Index m,
                       Index n, Index trial);

/// The exact-recovery verdict: max_k |d_k - c_k| <= tol max_k |c_k| (zero
/// signals must be recovered as exact zeros).
bool exact_recovery(const Eigen::VectorXcd& recovered,
                    const Eigen::VectorXcd& truth, double tol = 1e-4);

/// Run one algorithm on an instance with the harness defaults (stop at s = M
/// for OMP/Thresholding, residual stop capped at N iterations for MP,
/// debiased Douglas-Rachford for BP). Returns the dense coefficient vector
/// used by the success verdict.
Eigen::VectorXcd run_algorithm(Algorithm alg, const Instance& inst, Index m,
                               const ExperimentConfig& cfg);

struct SweepRow {
  Algorithm alg;
  Index d = 0, n = 0, m = 0, trials = 0, successes = 0;
  double mean_time_seconds = 0.0;
  bool skipped = false;
};
struct SweepResult {
  std::vector<SweepRow> rows;
  std::string config_hash;
};
SweepResult run_success_sweep(const ExperimentConfig& cfg);

struct OversampleRow {
  Algorithm alg;
  Index d = 0, m = 0, trials = 0;
  double target_rate = 0.9;
  Index n_star = 0;     // smallest N reaching the target rate
  double theta = 0.0;   // N*/M
  bool saturated = false;  // even N = D missed the target
};
struct OversampleResult {
  std::vector<OversampleRow> rows;
  std::string config_hash;
};
OversampleResult run_oversampling_search(const ExperimentConfig& cfg);

struct TimingRow {
  std::string variant;  // omp-qr-explicit | omp-lsqr-fft | bp
  Index d = 0, m = 0, n = 0, runs = 0;
  double median_seconds = 0.0;
};
struct TimingResult {
  std::vector<TimingRow> rows;
  std::string config_hash;
};
/// Wall-clock medians over >= 5 runs per variant (a warm-up run is excluded;
/// short solves are batched so each measured sample spans at least ~10 ms).
/// Timing runs are forced single-threaded. The measured values are the one
/// part of the harness that is not bit-reproducible.
TimingResult run_timing(const ExperimentConfig& cfg);

struct NoiseRow {
  Index trial = 0, m = 0;
  double sigma2 = 0.0;
  bool support_recovered = false;
  double max_coeff_error = 0.0;
  double psnr_db = 0.0;  // +inf sentinel when sigma2 = 0
};
struct NoiseResult {
  std::vector<NoiseRow> rows;
  std::string config_hash;
};
NoiseResult run_noise(const ExperimentConfig& cfg);

struct AuditRow {
  std::string check;  // "coherence" or "eigenvalue"
  ModelKind model = ModelKind::discrete;
  Index d = 0, m = 0, n = 0, trials = 0, violations = 0;
  double eps = 0.0;
  double fraction = 0.0;
};
struct AuditResult {
  std::vector<AuditRow> rows;
  std::string config_hash;
};
/// Coherence and Gram-eigenvalue audits at the theorem sample counts (or at
/// cfg.n_samples when nonzero). Discrete sampling sets are drawn with
/// replacement here, matching the probability model the bounds are stated for.
AuditResult run_coherence_audit(const ExperimentConfig& cfg);

// CSV emission. Headers included; floats at 17 significant digits; LF line
// endings; every row carries the config hash and the seed-rule version.
void write_csv(std::ostream& os, const SweepResult& r);
void write_csv(std::ostream& os, const OversampleResult& r);
void write_csv(std::ostream& os, const TimingResult& r);
void write_csv(std::ostream& os, const NoiseResult& r);
void write_csv(std::ostream& os, const AuditResult& r);

// Gnuplot companion output: space-separated columns, '#'-prefixed header.
void write_dat(std::ostream& os, const SweepResult& r);
void write_dat(std::ostream& os, const OversampleResult& r);
void write_dat(std::ostream& os, const TimingResult& r);
void write_dat(std::ostream& os, const NoiseResult& r);
void write_dat(std::ostream& os, const AuditResult& r);

// One-shot recovery io: sample rows are "x_1,...,x_d,re,im"; coefficient
// rows are "k_1,...,k_d,re,im" (recovered support only).
struct SampleTable {
  Eigen::MatrixXd points;   // N x d, radians
  Eigen::VectorXcd values;  // N
};
SampleTable read_samples_csv(std::istream& is, int dim);
void write_samples_csv(std::ostream& os, const SampleTable& t);
void write_coefficients_csv(std::ostream& os, const FrequencySet& gamma,
                            const Eigen::VectorXcd& coefficients);

std::string model_name(ModelKind kind);

}  // namespace strig
