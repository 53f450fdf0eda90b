#include <doctest.h>

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include "strig/analysis.hpp"
#include "strig/experiments.hpp"
#include "strig/greedy.hpp"
#include "test_util.hpp"

using namespace strig;

namespace {

ExperimentConfig base_cfg(Index d, Index n, std::uint64_t seed,
                          ModelKind model = ModelKind::discrete) {
  ExperimentConfig cfg;
  cfg.d_size = d;
  cfg.n_samples = n;
  cfg.seed = seed;
  cfg.model = model;
  return cfg;
}

}  // namespace

TEST_SUITE("greedy") {

TEST_CASE("omp on a 1-sparse signal nails the frequency in one step") {
  const auto cfg = base_cfg(64, 9, 21, ModelKind::continuous);
  for (Index trial = 0; trial < 10; ++trial) {
    const Instance inst = make_instance(cfg, 64, 1, 9, trial);
    const RecoveryOutcome out =
        omp(*inst.op, inst.samples, StoppingRule::sparsity(1));
    REQUIRE(out.iterations == 1);
    CHECK(out.selected_indices[0] == inst.truth->support()[0]);
    CHECK(out.residual_norms.back() <= 1e-10 * inst.samples.norm());
  }
}

TEST_CASE("omp coefficients match a dense normal-equations oracle") {
  const auto cfg = base_cfg(32, 16, 5);
  const Instance inst = make_instance(cfg, 32, 3, 16, 0);
  const RecoveryOutcome out = omp(*inst.op, inst.samples, StoppingRule::sparsity(3));
  REQUIRE(out.iterations == 3);

  const auto& mop = dynamic_cast<const MeasurementOperator&>(*inst.op);
  const Eigen::MatrixXcd a = testutil::dense_oracle(mop.sampling(), mop.frequencies());
  Eigen::MatrixXcd at(16, 3);
  for (std::size_t i = 0; i < out.support.size(); ++i)
    at.col(static_cast<Index>(i)) = a.col(out.support[i]);
  const Eigen::VectorXcd oracle =
      (at.adjoint() * at).ldlt().solve(at.adjoint() * inst.samples);
  for (std::size_t i = 0; i < out.support.size(); ++i)
    CHECK(std::abs(out.coefficients[out.support[i]] - oracle[static_cast<Index>(i)]) <= 1e-8);
}

TEST_CASE("omp recovers exactly when it finds the true support") {
  const auto cfg = base_cfg(100, 40, 91);
  int qualified = 0;
  for (Index trial = 0; trial < 30; ++trial) {
    const Instance inst = make_instance(cfg, 100, 5, 40, trial);
    const RecoveryOutcome out = omp(*inst.op, inst.samples, StoppingRule::sparsity(5));
    if (out.support != inst.truth->support()) continue;
    ++qualified;
    const Eigen::VectorXcd truth = inst.truth->dense();
    CHECK((out.coefficients - truth).cwiseAbs().maxCoeff() <=
          1e-8 * truth.cwiseAbs().maxCoeff());
  }
  CHECK(qualified >= 25);
}

TEST_CASE("omp success rate at D=100, N=40, M=5 is at least 0.95") {
  ExperimentConfig cfg = base_cfg(100, 40, 2024);
  cfg.trials = 100;
  cfg.m_range = {5};
  const SweepResult res = run_success_sweep(cfg);
  CHECK(double(res.rows[0].successes) / 100.0 >= 0.95);
}

TEST_CASE("omp never reselects; residual is orthogonal to selected columns") {
  const auto cfg = base_cfg(64, 24, 33);
  for (Index trial = 0; trial < 5; ++trial) {
    const Instance inst = make_instance(cfg, 64, 6, 24, trial);
    const RecoveryOutcome out = omp(*inst.op, inst.samples, StoppingRule::sparsity(6));
    std::vector<Index> sorted = out.selected_indices;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());

    Eigen::VectorXcd residual = inst.samples;
    for (std::size_t i = 0; i < out.support.size(); ++i)
      residual -= out.coefficients[out.support[i]] * inst.op->column(out.support[i]);
    const double rn = residual.norm();
    for (Index k : out.support)
      CHECK(std::abs(inst.op->column(k).dot(residual)) <=
            1e-8 * std::sqrt(24.0) * std::max(rn, 1e-12));
  }
}

TEST_CASE("omp and mp residual norms never increase") {
  const auto cfg = base_cfg(64, 32, 14);
  const Instance inst = make_instance(cfg, 64, 8, 32, 1);
  for (const RecoveryOutcome& out :
       {omp(*inst.op, inst.samples, StoppingRule::sparsity(8)),
        mp(*inst.op, inst.samples, StoppingRule::either(32, 1e-8 * inst.samples.norm()))}) {
    for (std::size_t i = 1; i < out.residual_norms.size(); ++i)
      CHECK(out.residual_norms[i] <= out.residual_norms[i - 1] * (1.0 + 1e-12));
  }
}

TEST_CASE("stopping rule validation") {
  const auto cfg = base_cfg(16, 8, 1);
  const Instance inst = make_instance(cfg, 16, 2, 8, 0);
  CHECK_THROWS_AS(omp(*inst.op, inst.samples, StoppingRule{std::nullopt, std::nullopt}),
                  std::invalid_argument);
  CHECK_THROWS_AS(omp(*inst.op, inst.samples, StoppingRule::sparsity(9)),
                  std::invalid_argument);
  Eigen::VectorXcd wrong(7);
  wrong.setZero();
  CHECK_THROWS_AS(omp(*inst.op, wrong, StoppingRule::sparsity(1)), std::invalid_argument);
}

TEST_CASE("incremental qr: pinned shapes and the dense-QR oracle") {
  auto gamma = testutil::centered(32);
  const SamplingSet x = draw_continuous(1, 20, 3);
  const MeasurementOperator op(x, gamma);

  IncrementalQr qr(20);
  qr.append_column(op.column(4));
  CHECK(qr.r()(0, 0).real() == doctest::Approx(std::sqrt(20.0)).epsilon(1e-13));

  // Against from-scratch dense QR, growing one column at a time up to 20.
  Eigen::MatrixXcd cols(20, 0);
  Rng rng(77);
  std::vector<Index> picks;
  for (Index s = 0; s < 20; ++s) {
    Index k;
    do k = static_cast<Index>(rng.below(32));
    while (std::find(picks.begin(), picks.end(), k) != picks.end());
    picks.push_back(k);
    cols.conservativeResize(20, s + 1);
    cols.col(s) = op.column(k);
    if (s > 0) qr.append_column(cols.col(s));
    Eigen::VectorXcd f(20);
    for (Index j = 0; j < 20; ++j) f[j] = rng.complex_normal();
    const Eigen::VectorXcd mine = qr.solve(f);
    const Eigen::VectorXcd dense = cols.householderQr().solve(f);
    CHECK((mine - dense).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, dense.cwiseAbs().maxCoeff()));
  }

  // Orthogonal columns (full grid): the triangular factor is sqrt(N) I.
  const SamplingSet full = draw_discrete_subset(16, 1, 16, 6);
  const MeasurementOperator fop(full, testutil::centered(16));
  IncrementalQr oq(16);
  for (Index k : {Index(2), Index(7), Index(12)}) oq.append_column(fop.column(k));
  const Eigen::MatrixXcd r = oq.r();
  CHECK((r - std::sqrt(16.0) * Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-12 * 4.0);

  // A numerically dependent column is refused.
  IncrementalQr dq(20);
  dq.append_column(op.column(0));
  CHECK_THROWS_AS(dq.append_column(Complex(0.5, 0.25) * op.column(0)), DegenerateColumnError);
}

TEST_CASE("lsqr: one-column exactness and iteration budget") {
  auto gamma = testutil::centered(32);
  const SamplingSet x = draw_continuous(1, 20, 13);
  const MeasurementOperator op(x, gamma);

  Eigen::MatrixXcd single(20, 1);
  single.col(0) = op.column(9);
  Rng rng(4);
  Eigen::VectorXcd f(20);
  for (Index j = 0; j < 20; ++j) f[j] = rng.complex_normal();
  const LsqrResult res = lsqr(single, f);
  CHECK(res.converged);
  CHECK(res.iterations == 1);
  CHECK(std::abs(res.x[0] - single.col(0).dot(f) / 20.0) <= 1e-12);

  // Well-conditioned supports (eigenvalues of N^-1 Gram within [1/2, 3/2])
  // converge in at most 60 iterations at tol 1e-10.
  const auto cfg = base_cfg(256, 128, 55);
  int checked = 0;
  for (Index trial = 0; trial < 10; ++trial) {
    const Instance inst = make_instance(cfg, 256, 8, 128, trial);
    const SupportOperator sub(*inst.op, inst.truth->support());
    const EigBoundReport eig = gram_eigs(sub);
    if (eig.lambda_min < 0.5 || eig.lambda_max > 1.5) continue;
    ++checked;
    LsqrOptions opts;
    opts.tolerance = 1e-10;
    opts.max_iterations = 60;
    const LsqrResult r = lsqr(sub.matrix(), inst.samples, opts);
    CHECK(r.converged);
    CHECK(r.iterations <= 60);
  }
  CHECK(checked >= 8);
}

TEST_CASE("qr and lsqr backends agree to 1e-8 on 50 seeded instances") {
  const auto cfg = base_cfg(64, 32, 17);
  for (Index trial = 0; trial < 50; ++trial) {
    const Instance inst = make_instance(cfg, 64, 5, 32, trial);
    const RecoveryOutcome a = omp(*inst.op, inst.samples, StoppingRule::sparsity(5),
                                  LsBackend::qr_update);
    const RecoveryOutcome b = omp(*inst.op, inst.samples, StoppingRule::sparsity(5),
                                  LsBackend::iterative_ls);
    CHECK(b.ls_converged);
    CHECK(a.support == b.support);
    CHECK((a.coefficients - b.coefficients).cwiseAbs().maxCoeff() <=
          1e-8 * std::max(1.0, a.coefficients.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("mp: one-step recovery, exponential decay, orthogonal stop") {
  const auto cfg1 = base_cfg(64, 9, 21, ModelKind::continuous);
  const Instance one = make_instance(cfg1, 64, 1, 9, 2);
  const RecoveryOutcome r1 = mp(*one.op, one.samples,
                                StoppingRule::either(9, 1e-10 * one.samples.norm()));
  CHECK(r1.iterations == 1);
  CHECK(r1.residual_norms.back() <= 1e-10 * one.samples.norm());

  // Under (2M-1) mu < 1 the residual decays below 1e-6 within 200 steps.
  const auto cfg2 = base_cfg(16, 400, 71, ModelKind::continuous);
  int tested = 0;
  for (Index trial = 0; trial < 5; ++trial) {
    const Instance inst = make_instance(cfg2, 16, 3, 400, trial);
    const auto& mop = dynamic_cast<const MeasurementOperator&>(*inst.op);
    if (!check_omp_uniform(coherence(mop), 3)) continue;
    ++tested;
    const RecoveryOutcome out = mp(*inst.op, inst.samples,
                                   StoppingRule::either(200, 1e-6 * inst.samples.norm()));
    CHECK(out.residual_norms.back() <= 1e-6 * inst.samples.norm());
  }
  CHECK(tested >= 4);

  // Samples orthogonal to every column: immediate stop with zero update.
  auto small = std::make_shared<FrequencySet>(FrequencySet::from_list(1, {{-2}, {-1}, {0}, {1}}));
  const SamplingSet full = draw_discrete_subset(8, 1, 8, 1);
  const MeasurementOperator op(full, small);
  Eigen::VectorXcd orth(8);  // a DFT column for frequency 3, outside Gamma
  for (Index j = 0; j < 8; ++j)
    orth[j] = std::polar(1.0, 3.0 * full.coord(j, 0));
  const RecoveryOutcome r3 = mp(op, orth, StoppingRule::either(8, 0.0));
  CHECK(r3.iterations == 0);
  CHECK(r3.stop_reason == StopReason::no_improvement);
  CHECK(r3.coefficients.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("thresholding: selection oracle, ties, scaling invariance") {
  const auto cfg = base_cfg(16, 8, 77);
  const Instance inst = make_instance(cfg, 16, 2, 8, 0);
  const RecoveryOutcome out = thresholding(*inst.op, inst.samples, 2);

  // Brute-force oracle: all 16 inner products, full sort.
  const auto& mop = dynamic_cast<const MeasurementOperator&>(*inst.op);
  const Eigen::MatrixXcd a = testutil::dense_oracle(mop.sampling(), mop.frequencies());
  std::vector<std::pair<double, Index>> scored;
  for (Index k = 0; k < 16; ++k)
    scored.push_back({std::abs(a.col(k).dot(inst.samples)), k});
  std::sort(scored.begin(), scored.end(), [](const auto& p, const auto& q) {
    return p.first > q.first || (p.first == q.first && p.second < q.second);
  });
  std::vector<Index> expected{scored[0].second, scored[1].second};
  std::sort(expected.begin(), expected.end());
  CHECK(out.support == expected);

  // Selection is invariant under global complex scaling of the samples.
  const RecoveryOutcome scaled =
      thresholding(*inst.op, Complex(2.0, -3.0) * inst.samples, 2);
  CHECK(scaled.support == out.support);

  CHECK_THROWS_AS(thresholding(*inst.op, inst.samples, 9), std::invalid_argument);

  const RecoveryOutcome m1 = thresholding(*inst.op, inst.samples, 1);
  const RecoveryOutcome o1 = omp(*inst.op, inst.samples, StoppingRule::sparsity(1));
  CHECK(m1.support == o1.support);  // same first selection
}

TEST_CASE("thresholding on a 1-sparse signal recovers exactly") {
  const auto cfg = base_cfg(64, 9, 21, ModelKind::continuous);
  const Instance inst = make_instance(cfg, 64, 1, 9, 4);
  const RecoveryOutcome out = thresholding(*inst.op, inst.samples, 1);
  CHECK(out.support == inst.truth->support());
  CHECK((out.coefficients - inst.truth->dense()).cwiseAbs().maxCoeff() <=
        1e-10 * inst.truth->dense().cwiseAbs().maxCoeff());
}

}  // TEST_SUITE
