#include "strig/greedy.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace strig {

namespace {

// Largest normalized correlation |z_k|^2 / ||phi_k||^2 over unmasked columns;
// ascending scan with strict improvement keeps the smallest canonical index
// on ties. Returns -1 if every candidate scores zero.
Index select_argmax(const LinearOperator& op, const Eigen::VectorXcd& z,
                    const std::vector<bool>* mask) {
  Index best = -1;
  double best_score = 0.0;
  for (Index k = 0; k < z.size(); ++k) {
    if (mask && (*mask)[static_cast<std::size_t>(k)]) continue;
    const double score = std::norm(z[k]) / op.column_squared_norm(k);
    if (score > best_score) {
      best_score = score;
      best = k;
    }
  }
  return best;
}

void validate_stop(const StoppingRule& stop, Index n) {
  if (!stop.max_sparsity && !stop.residual_tolerance)
    throw std::invalid_argument("StoppingRule: at least one criterion must be set");
  if (stop.max_sparsity && (*stop.max_sparsity < 0 || *stop.max_sparsity > n))
    throw std::invalid_argument("StoppingRule: max sparsity must lie in [0, N]");
  if (stop.residual_tolerance && *stop.residual_tolerance < 0)
    throw std::invalid_argument("StoppingRule: residual tolerance must be >= 0");
}

}  // namespace

IncrementalQr::IncrementalQr(Index rows, double rel_tol)
    : rows_(rows), rel_tol_(rel_tol) {
  if (rows_ < 1) throw std::invalid_argument("IncrementalQr: need at least one row");
}

void IncrementalQr::append_column(const Eigen::VectorXcd& col) {
  if (col.size() != rows_)
    throw std::invalid_argument("IncrementalQr: column length mismatch");
  if (size_ == rows_)
    throw std::invalid_argument("IncrementalQr: more columns than rows");
  if (size_ == q_.cols()) {
    const Index cap = std::min(rows_, std::max<Index>(8, 2 * (size_ + 1)));
    q_.conservativeResize(rows_, cap);
    r_.conservativeResize(cap, cap);
  }

  // Classical Gram-Schmidt with one reorthogonalization pass (CGS2).
  Eigen::VectorXcd w = Eigen::VectorXcd::Zero(size_);
  Eigen::VectorXcd v = col;
  if (size_ > 0) {
    const auto q = q_.leftCols(size_);
    w = q.adjoint() * col;
    v -= q * w;
    const Eigen::VectorXcd w2 = q.adjoint() * v;
    v -= q * w2;
    w += w2;
  }
  const double rho = v.norm();
  if (rho < rel_tol_ * col.norm())
    throw DegenerateColumnError("IncrementalQr: numerically dependent column");

  q_.col(size_) = v / rho;
  r_.col(size_).head(size_) = w;
  r_.col(size_).segment(size_, 1)[0] = Complex(rho, 0.0);
  for (Index i = size_ + 1; i < r_.rows(); ++i) r_(i, size_) = Complex(0, 0);
  ++size_;
}

Eigen::VectorXcd IncrementalQr::solve(const Eigen::VectorXcd& rhs) const {
  if (rhs.size() != rows_)
    throw std::invalid_argument("IncrementalQr::solve: rhs length mismatch");
  if (size_ == 0) return Eigen::VectorXcd();
  const Eigen::VectorXcd y = q_.leftCols(size_).adjoint() * rhs;
  return r_.topLeftCorner(size_, size_)
      .triangularView<Eigen::Upper>()
      .solve(y);
}

LsqrResult lsqr(const Eigen::MatrixXcd& a, const Eigen::VectorXcd& b,
                const LsqrOptions& opts) {
  if (a.rows() != b.size())
    throw std::invalid_argument("lsqr: dimension mismatch");
  LsqrResult result;
  result.x = Eigen::VectorXcd::Zero(a.cols());

  double beta = b.norm();
  if (beta == 0.0) {
    result.converged = true;
    return result;
  }
  Eigen::VectorXcd u = b / beta;
  Eigen::VectorXcd v = a.adjoint() * u;
  double alpha = v.norm();
  if (alpha == 0.0) {  // b orthogonal to the range of A
    result.converged = true;
    return result;
  }
  v /= alpha;
  Eigen::VectorXcd w = v;
  double phibar = beta, rhobar = alpha;
  const double atb_norm = alpha * beta;

  for (Index it = 1; it <= opts.max_iterations; ++it) {
    u = a * v - alpha * u;
    beta = u.norm();
    if (beta > 0) u /= beta;
    v = a.adjoint() * u - beta * v;
    alpha = v.norm();
    if (alpha > 0) v /= alpha;

    const double rho = std::hypot(rhobar, beta);
    const double c = rhobar / rho;
    const double s = beta / rho;
    const double theta = s * alpha;
    rhobar = -c * alpha;
    const double phi = c * phibar;
    phibar = s * phibar;

    result.x += (phi / rho) * w;
    w = v - (theta / rho) * w;
    result.iterations = it;

    const double ne_res = (a.adjoint() * (b - a * result.x)).norm();
    if (ne_res <= opts.tolerance * atb_norm) {
      result.converged = true;
      break;
    }
  }
  return result;
}

RecoveryOutcome omp(const LinearOperator& op, const Eigen::VectorXcd& samples,
                    const StoppingRule& stop, LsBackend backend,
                    const LsqrOptions& ls_opts) {
  const Index n = op.rows(), d = op.cols();
  if (samples.size() != n)
    throw std::invalid_argument("omp: sample length mismatch");
  validate_stop(stop, n);

  RecoveryOutcome out;
  Eigen::VectorXcd r = samples;
  out.residual_norms.push_back(r.norm());

  std::vector<bool> mask(static_cast<std::size_t>(d), false);
  Eigen::MatrixXcd cols(n, 0);
  Eigen::VectorXcd solution;
  IncrementalQr qr(n);
  Eigen::VectorXcd z;

  for (;;) {
    const Index s = static_cast<Index>(out.selected_indices.size());
    if (stop.max_sparsity && s == *stop.max_sparsity) {
      out.stop_reason = StopReason::sparsity_reached;
      break;
    }
    if (stop.residual_tolerance &&
        out.residual_norms.back() <= *stop.residual_tolerance) {
      out.stop_reason = StopReason::residual_small;
      break;
    }
    if (s == n) {
      out.stop_reason = StopReason::iteration_limit;
      break;
    }

    op.adjoint_into(r, z);
    const Index pick = select_argmax(op, z, &mask);
    if (pick < 0) {
      out.stop_reason = StopReason::no_improvement;
      break;
    }

    const Eigen::VectorXcd col = op.column(pick);
    cols.conservativeResize(n, s + 1);
    cols.col(s) = col;
    if (backend == LsBackend::qr_update) {
      qr.append_column(col);
      solution = qr.solve(samples);
    } else {
      const LsqrResult ls = lsqr(cols, samples, ls_opts);
      solution = ls.x;
      out.ls_iterations += ls.iterations;
      if (!ls.converged) out.ls_converged = false;
    }

    r = samples - cols * solution;
    mask[static_cast<std::size_t>(pick)] = true;
    out.selected_indices.push_back(pick);
    out.residual_norms.push_back(r.norm());
  }

  out.iterations = static_cast<Index>(out.selected_indices.size());
  out.support = out.selected_indices;
  std::sort(out.support.begin(), out.support.end());
  out.coefficients = Eigen::VectorXcd::Zero(d);
  for (Index i = 0; i < out.iterations; ++i)
    out.coefficients[out.selected_indices[static_cast<std::size_t>(i)]] = solution[i];
  return out;
}

RecoveryOutcome mp(const LinearOperator& op, const Eigen::VectorXcd& samples,
                   const StoppingRule& stop) {
  const Index n = op.rows(), d = op.cols();
  if (samples.size() != n)
    throw std::invalid_argument("mp: sample length mismatch");
  validate_stop(stop, n);
  const Index cap = stop.max_sparsity ? *stop.max_sparsity : n;

  RecoveryOutcome out;
  out.coefficients = Eigen::VectorXcd::Zero(d);
  Eigen::VectorXcd r = samples;
  out.residual_norms.push_back(r.norm());
  Eigen::VectorXcd z;

  for (;;) {
    const Index s = static_cast<Index>(out.selected_indices.size());
    if (stop.residual_tolerance &&
        out.residual_norms.back() <= *stop.residual_tolerance) {
      out.stop_reason = StopReason::residual_small;
      break;
    }
    if (s == cap) {
      out.stop_reason = stop.max_sparsity ? StopReason::sparsity_reached
                                          : StopReason::iteration_limit;
      break;
    }

    op.adjoint_into(r, z);
    const Index pick = select_argmax(op, z, nullptr);
    if (pick < 0) {
      out.stop_reason = StopReason::no_improvement;
      break;
    }

    // Update in the unnormalized-column convention: the normalized-column
    // step r -= <r, phi~> phi~ equals r -= (z_k / ||phi_k||^2) phi_k.
    const Complex increment = z[pick] / op.column_squared_norm(pick);
    out.coefficients[pick] += increment;
    r -= increment * op.column(pick);
    out.selected_indices.push_back(pick);
    out.residual_norms.push_back(r.norm());
  }

  out.iterations = static_cast<Index>(out.selected_indices.size());
  out.support = out.selected_indices;
  std::sort(out.support.begin(), out.support.end());
  out.support.erase(std::unique(out.support.begin(), out.support.end()),
                    out.support.end());
  return out;
}

RecoveryOutcome thresholding(const LinearOperator& op,
                             const Eigen::VectorXcd& samples, Index m) {
  const Index n = op.rows(), d = op.cols();
  if (samples.size() != n)
    throw std::invalid_argument("thresholding: sample length mismatch");
  if (m < 0 || m > n)
    throw std::invalid_argument(
        "thresholding: need 0 <= m <= N (least squares would be underdetermined)");
  if (m > d) throw std::invalid_argument("thresholding: m exceeds the column count");

  RecoveryOutcome out;
  out.coefficients = Eigen::VectorXcd::Zero(d);
  out.residual_norms.push_back(samples.norm());
  if (m == 0) {
    out.stop_reason = StopReason::sparsity_reached;
    return out;
  }

  Eigen::VectorXcd z;
  op.adjoint_into(samples, z);
  std::vector<double> score(static_cast<std::size_t>(d));
  for (Index k = 0; k < d; ++k)
    score[static_cast<std::size_t>(k)] = std::norm(z[k]) / op.column_squared_norm(k);

  std::vector<Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), Index{0});
  std::partial_sort(order.begin(), order.begin() + m, order.end(),
                    [&score](Index a, Index b) {
                      const double sa = score[static_cast<std::size_t>(a)];
                      const double sb = score[static_cast<std::size_t>(b)];
                      return sa > sb || (sa == sb && a < b);
                    });
  out.selected_indices.assign(order.begin(), order.begin() + m);
  out.support = out.selected_indices;
  std::sort(out.support.begin(), out.support.end());

  SupportOperator sub(op, out.support);
  const Eigen::VectorXcd solution = sub.matrix().colPivHouseholderQr().solve(samples);
  for (Index i = 0; i < m; ++i) out.coefficients[out.support[static_cast<std::size_t>(i)]] = solution[i];
  out.iterations = 1;
  out.residual_norms.push_back((samples - sub.matrix() * solution).norm());
  out.stop_reason = StopReason::sparsity_reached;
  return out;
}

}  // namespace strig
