// Dense two-phase primal simplex with Bland's anti-cycling rule. Desk-scale
// only; used as the independent oracle for real-mode Basis Pursuit.

#include <Eigen/Core>
#include <stdexcept>
#include <vector>

#include "strig/basis_pursuit.hpp"

namespace strig::detail {

namespace {
constexpr double kPivotEps = 1e-9;
constexpr double kFeasEps = 1e-7;
}

SimplexResult simplex_min_equality(const Eigen::MatrixXd& a,
                                   const Eigen::VectorXd& b,
                                   const Eigen::VectorXd& c,
                                   Index max_pivots) {
  const Index rows0 = a.rows();
  const Index cols = a.cols();
  if (b.size() != rows0 || c.size() != cols)
    throw std::invalid_argument("simplex: dimension mismatch");

  // Tableau [A | I | rhs] with nonnegative rhs; artificial basis.
  Eigen::MatrixXd t(rows0, cols + rows0 + 1);
  t.leftCols(cols) = a;
  t.middleCols(cols, rows0).setIdentity();
  t.col(cols + rows0) = b;
  for (Index i = 0; i < rows0; ++i)
    if (t(i, cols + rows0) < 0.0) t.row(i) = -t.row(i);

  std::vector<Index> basis(static_cast<std::size_t>(rows0));
  for (Index i = 0; i < rows0; ++i) basis[static_cast<std::size_t>(i)] = cols + i;
  std::vector<bool> active_row(static_cast<std::size_t>(rows0), true);

  Index pivots = 0;
  const Index total_cols = cols + rows0;
  Eigen::VectorXd red(total_cols);

  auto recompute_reduced = [&](const Eigen::VectorXd& cost) {
    red = cost;
    for (Index i = 0; i < rows0; ++i) {
      if (!active_row[static_cast<std::size_t>(i)]) continue;
      const double cb = cost[basis[static_cast<std::size_t>(i)]];
      if (cb != 0.0) red -= cb * t.row(i).head(total_cols).transpose();
    }
  };

  auto pivot = [&](Index enter, Index leave_row) {
    if (++pivots > max_pivots)
      throw std::runtime_error("simplex: cycling guard exceeded");
    t.row(leave_row) /= t(leave_row, enter);
    for (Index i = 0; i < rows0; ++i) {
      if (i == leave_row || !active_row[static_cast<std::size_t>(i)]) continue;
      const double factor = t(i, enter);
      if (factor != 0.0) t.row(i) -= factor * t.row(leave_row);
    }
    const double rfac = red[enter];
    if (rfac != 0.0) red -= rfac * t.row(leave_row).head(total_cols).transpose();
    basis[static_cast<std::size_t>(leave_row)] = enter;
  };

  auto run_phase = [&](Index max_col) {
    for (;;) {
      // Bland: the entering variable is the smallest eligible index.
      Index enter = -1;
      for (Index j = 0; j < max_col; ++j)
        if (red[j] < -kPivotEps) {
          enter = j;
          break;
        }
      if (enter < 0) return;

      Index leave = -1;
      double best_ratio = 0.0;
      for (Index i = 0; i < rows0; ++i) {
        if (!active_row[static_cast<std::size_t>(i)]) continue;
        const double aie = t(i, enter);
        if (aie <= kPivotEps) continue;
        const double ratio = t(i, total_cols) / aie;
        if (leave < 0 || ratio < best_ratio - kPivotEps ||
            (std::abs(ratio - best_ratio) <= kPivotEps &&
             basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
          leave = i;
          best_ratio = ratio;
        }
      }
      if (leave < 0) throw std::runtime_error("simplex: unbounded program");
      pivot(enter, leave);
    }
  };

  // Phase 1: minimize the artificial sum.
  Eigen::VectorXd phase1_cost = Eigen::VectorXd::Zero(total_cols);
  phase1_cost.tail(rows0).setOnes();
  recompute_reduced(phase1_cost);
  run_phase(total_cols);

  double infeas = 0.0;
  for (Index i = 0; i < rows0; ++i)
    if (active_row[static_cast<std::size_t>(i)] && basis[static_cast<std::size_t>(i)] >= cols)
      infeas += t(i, total_cols);
  SimplexResult result;
  if (infeas > kFeasEps) {
    result.pivots = pivots;
    return result;  // infeasible
  }

  // Drive zero-valued artificials out of the basis; rows with no usable
  // pivot are linearly dependent and get dropped.
  for (Index i = 0; i < rows0; ++i) {
    if (!active_row[static_cast<std::size_t>(i)] || basis[static_cast<std::size_t>(i)] < cols) continue;
    Index enter = -1;
    for (Index j = 0; j < cols; ++j)
      if (std::abs(t(i, j)) > kPivotEps) {
        enter = j;
        break;
      }
    if (enter >= 0)
      pivot(enter, i);
    else
      active_row[static_cast<std::size_t>(i)] = false;
  }

  // Phase 2 over the original costs; artificial columns are retired.
  Eigen::VectorXd phase2_cost = Eigen::VectorXd::Zero(total_cols);
  phase2_cost.head(cols) = c;
  recompute_reduced(phase2_cost);
  run_phase(cols);

  result.feasible = true;
  result.pivots = pivots;
  result.x = Eigen::VectorXd::Zero(cols);
  for (Index i = 0; i < rows0; ++i) {
    if (!active_row[static_cast<std::size_t>(i)]) continue;
    const Index var = basis[static_cast<std::size_t>(i)];
    if (var < cols) result.x[var] = std::max(0.0, t(i, total_cols));
  }
  result.objective = c.dot(result.x);
  return result;
}

}  // namespace strig::detail
