// Executable diagnostics: coherence and the recovery predicates built on it,
// extreme Gram eigenvalues, brute-force restricted isometry constants, and
// the sample-count formulas with their explicit constants.

#pragma once

#include <Eigen/Core>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "strig/measurement.hpp"

namespace strig {

struct CoherenceReport {
  double mu = 0.0;                        // N^{-1} max_{j!=k} |<phi_j, phi_k>|
  std::pair<Index, Index> argmax_pair{0, 0};
  Index recovery_bound_sparsity = 0;      // largest M with (2M-1) mu < 1
};

/// Exact coherence of F_X. Inner products depend only on frequency
/// differences, so the scan runs over the D' distinct differences rather
/// than all column pairs.
CoherenceReport coherence(const MeasurementOperator& op);

/// Uniform OMP/BP recovery condition (2M-1) mu < 1: when true, every
/// M-sparse polynomial is recovered from this sampling set.
bool check_omp_uniform(const CoherenceReport& coh, Index m);

/// Uniform thresholding condition (2M-1) mu < 1/R for dynamic range R >= 1.
bool check_thresh_uniform(const CoherenceReport& coh, Index m, double r);

struct EigBoundReport {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double delta = 0.0;  // max(1 - lambda_min, lambda_max - 1)
};

/// Extreme eigenvalues of N^{-1} F_TX^* F_TX. Dense Hermitian solve for
/// supports up to 512 columns, power iteration (tolerance 1e-10) above.
EigBoundReport gram_eigs(const SupportOperator& sub);

struct RICReport {
  std::vector<double> deltas;            // delta_1 .. delta_Mmax
  std::optional<bool> condition_crt;     // delta_M + delta_2M + delta_3M < 1
                                         // at M = floor(Mmax/3), if >= 1
};

/// Restricted isometry constants of N^{-1/2} F_X by exhaustive subset
/// enumeration. Refuses instances with more than 10^6 subsets.
RICReport ric_bruteforce(const MeasurementOperator& op, Index m_max);

/// #{j - k : j, k in Gamma, j != k}. With the discrete model and Gamma equal
/// to Z_m^d (as residues), differences count in the periodic sense.
Index d_prime_count(const FrequencySet& gamma, std::optional<long> periodic_grid);

struct SampleBoundTable {
  long n_thresh = 0;           // ceil(17.89 M R^2 ln(4D/eps))
  long n_omp = 0;              // ceil(32.62 M ln(8D/eps))
  long n_coherence = 0;        // ceil(C (2M-1)^2 ln(4D'/eps)); C model-specific
  std::optional<long> n_bp;    // absolute constant unstated; reported unknown
  long d_prime = 0;
};

/// Sample-count table. Natural logarithms throughout; the coherence constant
/// is 4 + 4/(3 sqrt 2) for the discrete model and 4/3 for the continuous one.
SampleBoundTable sample_bounds(const FrequencySet& gamma, Index m, double r,
                               double eps, ModelKind model,
                               std::optional<long> periodic_grid);

/// Sample count making the eigenvalue band [1-delta, 1+delta] hold with
/// probability 1-eps: ceil(C delta^{-2} M ln(M/eps)) with C = 10, which
/// dominates the precise floor-form condition at desk scales.
long eig_bound_samples(Index m, double delta, double eps);

/// Concentration tail for off-support correlations: an upper bound on
/// P(|N^{-1} <F_TX c, phi_j>| >= x) for fixed c on T and j outside T.
double bernstein_offsupport_tail(double x, const Eigen::VectorXcd& support_values,
                                 Index n);

// Report serialization: one CSV row (with header) and a short text form.
void write_csv(std::ostream& os, const CoherenceReport& r);
void write_csv(std::ostream& os, const EigBoundReport& r);
void write_csv(std::ostream& os, const RICReport& r);
void write_csv(std::ostream& os, const SampleBoundTable& r);
std::string describe(const CoherenceReport& r);
std::string describe(const EigBoundReport& r);
std::string describe(const RICReport& r);
std::string describe(const SampleBoundTable& r);

namespace detail {
std::pair<double, double> extreme_eigs_dense(const Eigen::MatrixXcd& h);
std::pair<double, double> extreme_eigs_power(const Eigen::MatrixXcd& h, double tol);
}  // namespace detail

}  // namespace strig
