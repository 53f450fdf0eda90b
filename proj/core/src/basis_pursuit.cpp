#include "strig/basis_pursuit.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>

namespace strig {

namespace {

Complex soft_threshold(Complex v, double gamma) {
  const double a = std::abs(v);
  if (a <= gamma) return {0.0, 0.0};
  return v * ((a - gamma) / a);
}

double soft_threshold(double v, double gamma) {
  if (v > gamma) return v - gamma;
  if (v < -gamma) return v + gamma;
  return 0.0;
}

// F_X F_X^* assembled one column at a time through the operator's fast paths.
Eigen::MatrixXcd row_gram(const LinearOperator& op) {
  const Index n = op.rows();
  Eigen::MatrixXcd g(n, n);
  Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n), z, col;
  for (Index l = 0; l < n; ++l) {
    e[l] = 1.0;
    op.adjoint_into(e, z);
    op.apply_into(z, col);
    g.col(l) = col;
    e[l] = 0.0;
  }
  return ((g + g.adjoint()) / 2.0).eval();
}

}  // namespace

BPSolution solve_bp(const BPProblem& problem, const BpOptions& opts) {
  const LinearOperator& op = *problem.op;
  const Index n = op.rows(), d = op.cols();
  if (problem.samples.size() != n)
    throw std::invalid_argument("solve_bp: sample length mismatch");

  const double fnorm = problem.samples.norm();
  const double feas_tol = opts.feas_tol_rel * fnorm;
  const Index max_iter = opts.max_iter > 0 ? opts.max_iter : 50 * d;

  const Eigen::MatrixXcd gram = row_gram(op);
  Eigen::LDLT<Eigen::MatrixXcd> ldlt(gram);
  {
    const Eigen::VectorXd pivots = ldlt.vectorD().cwiseAbs();
    if (pivots.minCoeff() <= 1e-12 * pivots.maxCoeff())
      throw SingularSystemError("solve_bp: F_X F_X^* is numerically singular");
  }

  const Eigen::VectorXcd& f = problem.samples;
  auto project = [&](const Eigen::VectorXcd& v) {
    Eigen::VectorXcd fv, back;
    op.apply_into(v, fv);
    const Eigen::VectorXcd corr = ldlt.solve(fv - f);
    op.adjoint_into(corr, back);
    return Eigen::VectorXcd(v - back);
  };
  auto prox_l1 = [&](const Eigen::VectorXcd& v) {
    Eigen::VectorXcd u(d);
    if (problem.real_mode) {
      for (Index k = 0; k < d; ++k)
        u[k] = Complex(soft_threshold(v[k].real(), 1.0), 0.0);
    } else {
      for (Index k = 0; k < d; ++k) u[k] = soft_threshold(v[k], 1.0);
    }
    return u;
  };

  // Start from the least-norm interpolant (the projection of zero).
  Eigen::VectorXcd z = project(Eigen::VectorXcd::Zero(d));
  Eigen::VectorXcd candidate = z;

  BPSolution sol;
  for (Index it = 1; it <= max_iter; ++it) {
    const Eigen::VectorXcd u = prox_l1(z);
    candidate = project(2.0 * u - z);
    z += candidate - u;
    sol.iterations = it;

    // ||d - u|| is the fixed-point residual of the splitting iteration (the
    // step taken by the driving iterate z); it vanishes only at solutions.
    const double change = (candidate - u).norm();
    if (change <= opts.gap_tol) {
      Eigen::VectorXcd report = candidate;
      if (problem.real_mode) report = candidate.real().cast<Complex>();
      Eigen::VectorXcd fr;
      op.apply_into(report, fr);
      const double feas = (fr - f).norm();
      if (feas <= feas_tol) {
        sol.converged = true;
        candidate = report;
        sol.constraint_residual = feas;
        break;
      }
    }
  }

  if (!sol.converged) {
    if (problem.real_mode) candidate = candidate.real().cast<Complex>();
    Eigen::VectorXcd fr;
    op.apply_into(candidate, fr);
    sol.constraint_residual = (fr - f).norm();
  }
  sol.coefficients = candidate;
  sol.objective = candidate.cwiseAbs().sum();
  return sol;
}

CertificateResult check_dual_certificate(const LinearOperator& op,
                                         const Eigen::VectorXcd& candidate,
                                         const Eigen::VectorXcd& samples) {
  CertificateResult res;
  if (candidate.size() != op.cols() || samples.size() != op.rows())
    throw std::invalid_argument("check_dual_certificate: dimension mismatch");

  Eigen::VectorXcd fit;
  op.apply_into(candidate, fit);
  if ((fit - samples).norm() > 1e-10 * std::max(samples.norm(), 1e-300)) {
    res.reason = "candidate-infeasible";
    return res;
  }

  std::vector<Index> support;
  for (Index k = 0; k < candidate.size(); ++k)
    if (candidate[k] != Complex(0.0, 0.0)) support.push_back(k);
  if (support.empty()) {
    // Zero candidate: feasibility already implies f = 0, whose unique
    // minimizer is 0.
    res.certified = true;
    return res;
  }

  SupportOperator sub(op, support);
  const Eigen::MatrixXcd gram = sub.matrix().adjoint() * sub.matrix();
  Eigen::LDLT<Eigen::MatrixXcd> ldlt(gram);
  const Eigen::VectorXd pivots = ldlt.vectorD().cwiseAbs();
  if (pivots.minCoeff() <= 1e-12 * pivots.maxCoeff()) {
    res.reason = "singular";
    return res;
  }

  Eigen::VectorXcd sign(static_cast<Index>(support.size()));
  for (std::size_t i = 0; i < support.size(); ++i) {
    const Complex v = candidate[support[i]];
    sign[static_cast<Index>(i)] = v / std::abs(v);
  }
  const Eigen::VectorXcd eta = sub.matrix() * ldlt.solve(sign);
  Eigen::VectorXcd corr;
  op.adjoint_into(eta, corr);

  std::vector<bool> on_support(static_cast<std::size_t>(op.cols()), false);
  for (Index k : support) on_support[static_cast<std::size_t>(k)] = true;
  double off_max = 0.0;
  for (Index k = 0; k < corr.size(); ++k)
    if (!on_support[static_cast<std::size_t>(k)])
      off_max = std::max(off_max, std::abs(corr[k]));
  res.off_support_max = off_max;
  if (off_max < 1.0 - 1e-8) {
    res.certified = true;
  } else {
    res.reason = "dual-norm";
  }
  return res;
}

BPSolution solve_bp_real_lp_check(const BPProblem& problem) {
  const LinearOperator& op = *problem.op;
  const Index n = op.rows(), d = op.cols();
  if (!problem.real_mode)
    throw std::invalid_argument("solve_bp_real_lp_check: real mode only");
  if (d > 64)
    throw std::invalid_argument("solve_bp_real_lp_check: dense LP oracle is capped at D <= 64");
  if (problem.samples.size() != n)
    throw std::invalid_argument("solve_bp_real_lp_check: sample length mismatch");

  const Eigen::MatrixXcd fdense = op.dense();
  Eigen::MatrixXd a(2 * n, d);
  a.topRows(n) = fdense.real();
  a.bottomRows(n) = fdense.imag();
  Eigen::VectorXd b(2 * n);
  b.head(n) = problem.samples.real();
  b.tail(n) = problem.samples.imag();

  // Feasibility preprocessing: reject samples outside the range of the real
  // constraint matrix before handing the LP an infeasible program.
  const Eigen::VectorXd ls = a.colPivHouseholderQr().solve(b);
  if ((a * ls - b).norm() > 1e-8 * std::max(1.0, b.norm()))
    throw InfeasibleProblemError("solve_bp_real_lp_check: samples are not interpolable by real coefficients");

  BPSolution sol;
  if (b.norm() == 0.0) {
    sol.coefficients = Eigen::VectorXcd::Zero(d);
    sol.converged = true;
    return sol;
  }

  // Scale to unit rhs magnitude; the program is positively homogeneous.
  const double scale = b.cwiseAbs().maxCoeff();
  Eigen::MatrixXd e(2 * n, 2 * d);
  e.leftCols(d) = a;
  e.rightCols(d) = -a;
  const Eigen::VectorXd cost = Eigen::VectorXd::Ones(2 * d);
  const detail::SimplexResult lp =
      detail::simplex_min_equality(e, b / scale, cost, 200000);
  if (!lp.feasible)
    throw InfeasibleProblemError("solve_bp_real_lp_check: LP phase one failed");

  const Eigen::VectorXd dd = scale * (lp.x.head(d) - lp.x.tail(d));
  sol.coefficients = dd.cast<Complex>();
  sol.objective = dd.cwiseAbs().sum();
  sol.constraint_residual = (a * dd - b).norm();
  sol.iterations = lp.pivots;
  sol.converged = true;
  return sol;
}

Eigen::VectorXcd debias_on_support(const LinearOperator& op,
                                   const Eigen::VectorXcd& d,
                                   const Eigen::VectorXcd& samples,
                                   double rel_tol) {
  const double peak = d.cwiseAbs().maxCoeff();
  if (peak == 0.0) return Eigen::VectorXcd::Zero(d.size());
  std::vector<Index> support;
  for (Index k = 0; k < d.size(); ++k)
    if (std::abs(d[k]) > rel_tol * peak) support.push_back(k);
  if (support.empty() || static_cast<Index>(support.size()) > op.rows()) return d;

  SupportOperator sub(op, support);
  const Eigen::VectorXcd fit = sub.matrix().colPivHouseholderQr().solve(samples);
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(d.size());
  for (std::size_t i = 0; i < support.size(); ++i)
    out[support[i]] = fit[static_cast<Index>(i)];
  return out;
}

}  // namespace strig
