// Equality-constrained l1 minimization (Basis Pursuit): a Douglas-Rachford
// splitting solver with exact affine projection, a dual-certificate
// optimality checker, and a tiny-scale linear-program oracle for the
// real-coefficient mode.

#pragma once

#include <Eigen/Core>
#include <string>

#include "strig/errors.hpp"
#include "strig/measurement.hpp"

namespace strig {

struct BPProblem {
  const LinearOperator* op = nullptr;
  Eigen::VectorXcd samples;      // length N
  bool real_mode = false;        // restrict coefficients to real values

  BPProblem(const LinearOperator& o, Eigen::VectorXcd f, bool real = false)
      : op(&o), samples(std::move(f)), real_mode(real) {}
};

struct BpOptions {
  double feas_tol_rel = 1e-10;  // feasibility tolerance, relative to ||f||_2
  double gap_tol = 1e-9;        // successive-iterate change threshold
  Index max_iter = 0;           // 0 means 50 * D
};

struct BPSolution {
  Eigen::VectorXcd coefficients;  // length D (real-valued in real mode)
  double objective = 0.0;         // sum_k |d_k|
  double constraint_residual = 0.0;  // ||F_X d - f||_2
  Index iterations = 0;
  bool converged = false;
};

/// Douglas-Rachford iteration alternating the l1 proximal map (complex soft
/// thresholding; real soft thresholding of the real part in real mode) with
/// exact projection onto {d : F_X d = f} through a cached factorization of
/// the N x N Hermitian matrix F_X F_X^*. Step and relaxation parameters are
/// fixed at 1. Throws SingularSystemError when F_X F_X^* is singular to
/// 1e-12 relative pivot.
BPSolution solve_bp(const BPProblem& problem, const BpOptions& opts = {});

struct CertificateResult {
  bool certified = false;
  std::string reason;            // empty when certified
  double off_support_max = 0.0;  // max_{k not in T} |(F_X^* eta)_k|
};

/// Exact-duality check: builds eta = F_TX (F_TX^* F_TX)^{-1} sign(c_T) and
/// certifies iff F_TX is injective and every off-support correlation
/// |(F_X^* eta)_k| stays below 1 - 1e-8. Certification implies the candidate
/// is the unique l1 minimizer interpolating the samples. The candidate must
/// be feasible to 1e-10 relative.
CertificateResult check_dual_certificate(const LinearOperator& op,
                                         const Eigen::VectorXcd& candidate,
                                         const Eigen::VectorXcd& samples);

/// Independent tiny-scale oracle for real-mode Basis Pursuit: solves the
/// split-variable linear program min sum(u) + sum(v), d = u - v, u, v >= 0,
/// [Re F; Im F] d = [Re f; Im f] by a dense two-phase simplex method.
/// Requires real_mode and D <= 64. Doctored infeasible samples are rejected
/// by a least-squares feasibility check (InfeasibleProblemError).
BPSolution solve_bp_real_lp_check(const BPProblem& problem);

/// Least-squares refit on the detected support {k : |d_k| > rel_tol max|d|}.
/// Used by success verdicts to decouple solver tolerance from the recovery
/// decision. Returns d unchanged when the detected support exceeds N.
Eigen::VectorXcd debias_on_support(const LinearOperator& op,
                                   const Eigen::VectorXcd& d,
                                   const Eigen::VectorXcd& samples,
                                   double rel_tol = 1e-6);

namespace detail {

struct SimplexResult {
  Eigen::VectorXd x;
  double objective = 0.0;
  bool feasible = false;
  Index pivots = 0;
};

/// min c.x subject to a x = b, x >= 0; dense two-phase simplex with Bland's
/// rule. Throws when max_pivots is exceeded (cycling guard).
SimplexResult simplex_min_equality(const Eigen::MatrixXd& a,
                                   const Eigen::VectorXd& b,
                                   const Eigen::VectorXd& c,
                                   Index max_pivots);

}  // namespace detail

}  // namespace strig
