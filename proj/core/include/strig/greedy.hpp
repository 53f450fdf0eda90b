// Greedy recovery: Orthogonal Matching Pursuit, ordinary Matching Pursuit,
// and Thresholding, with two interchangeable least-squares backends
// (incremental QR update and LSQR).

#pragma once

#include <Eigen/Core>
#include <optional>
#include <vector>

#include "strig/errors.hpp"
#include "strig/measurement.hpp"

namespace strig {

/// Iteration control. At least one criterion must be set; no solver ever
/// exceeds N iterations regardless.
struct StoppingRule {
  std::optional<Index> max_sparsity;
  std::optional<double> residual_tolerance;  // absolute, on ||r_s||_2

  static StoppingRule sparsity(Index m) { return {m, std::nullopt}; }
  static StoppingRule residual(double eps) { return {std::nullopt, eps}; }
  static StoppingRule either(Index m, double eps) { return {m, eps}; }
};

enum class LsBackend { qr_update, iterative_ls };

enum class StopReason {
  sparsity_reached,
  residual_small,
  no_improvement,   // residual orthogonal to every column
  iteration_limit,  // hit the N-iteration hard cap
};

struct RecoveryOutcome {
  Eigen::VectorXcd coefficients;        // length D, zero off the support
  std::vector<Index> support;           // canonical (sorted) column indices
  Index iterations = 0;
  std::vector<double> residual_norms;   // [0] = ||f||, then one per iteration
  std::vector<Index> selected_indices;  // selection order, repeats possible (MP)
  StopReason stop_reason = StopReason::residual_small;
  bool ls_converged = true;             // iterative backend convergence flag
  Index ls_iterations = 0;              // total inner LSQR iterations
};

struct LsqrOptions {
  double tolerance = 1e-12;  // on ||A^*(b - Ax)|| / ||A^*b||
  Index max_iterations = 256;
};

/// Incrementally maintained thin QR factorization of a growing column set,
/// O(N s) per appended column. Appending a column whose orthogonalized part
/// has norm below rel_tol times its own norm throws DegenerateColumnError.
class IncrementalQr {
 public:
  explicit IncrementalQr(Index rows, double rel_tol = 1e-10);

  Index rows() const noexcept { return rows_; }
  Index size() const noexcept { return size_; }

  void append_column(const Eigen::VectorXcd& col);

  /// Least-squares solution for the current columns: R^{-1} Q^* rhs.
  Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const;

  Eigen::MatrixXcd q() const { return q_.leftCols(size_); }
  Eigen::MatrixXcd r() const { return r_.topLeftCorner(size_, size_); }

 private:
  Index rows_;
  Index size_ = 0;
  double rel_tol_;
  Eigen::MatrixXcd q_;  // rows_ x capacity
  Eigen::MatrixXcd r_;  // capacity x capacity, upper triangular
};

struct LsqrResult {
  Eigen::VectorXcd x;
  Index iterations = 0;
  bool converged = false;
};

/// LSQR (Paige & Saunders) on a dense complex matrix. Stops when the normal
/// equation residual ||A^*(b - Ax)|| drops below tolerance * ||A^*b||.
LsqrResult lsqr(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b,
                const LsqrOptions& opts = {});

/// Orthogonal Matching Pursuit. Per iteration: select the column with the
/// largest normalized residual correlation (ties broken by the smallest
/// canonical index), project onto the span of all selected columns, recompute
/// the residual. Stops per rule.
RecoveryOutcome omp(const LinearOperator& op, const Eigen::VectorXcd& samples,
                    const StoppingRule& stop,
                    LsBackend backend = LsBackend::qr_update,
                    const LsqrOptions& ls_opts = {});

/// Ordinary Matching Pursuit on unit-normalized columns: only the newest
/// coefficient is updated per step; indices may repeat. Coefficients are
/// reported in the unnormalized-column convention of F_X.
RecoveryOutcome mp(const LinearOperator& op, const Eigen::VectorXcd& samples,
                   const StoppingRule& stop);

/// One-shot selection of the m columns with the largest sample correlations
/// followed by a single least-squares fit. Requires m <= N.
RecoveryOutcome thresholding(const LinearOperator& op,
                             const Eigen::VectorXcd& samples, Index m);

}  // namespace strig
