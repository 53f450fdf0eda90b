#include <doctest.h>

#include <numbers>

#include "strig/measurement.hpp"
#include "test_util.hpp"

using namespace strig;
using testutil::dense_oracle;

namespace {

Eigen::VectorXcd random_cvec(Index n, Rng& rng) {
  Eigen::VectorXcd v(n);
  for (Index i = 0; i < n; ++i) v[i] = rng.complex_normal();
  return v;
}

}  // namespace

TEST_SUITE("measurement") {

TEST_CASE("unit mass at frequency zero maps to the all-ones vector") {
  auto gamma = testutil::centered(16);
  for (bool discrete : {true, false}) {
    const SamplingSet x = discrete ? draw_discrete(16, 1, 10, 3) : draw_continuous(1, 10, 3);
    const MeasurementOperator op(x, gamma);
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(16);
    c[8] = 1.0;  // k = 0
    const Eigen::VectorXcd f = op.apply(c);
    for (Index j = 0; j < 10; ++j) CHECK(std::abs(f[j] - Complex(1, 0)) < 1e-14);
  }
}

TEST_CASE("columns are unimodular with squared norm exactly N") {
  auto gamma = testutil::centered(32);
  const MeasurementOperator op(draw_continuous(1, 24, 5), gamma);
  for (Index k : {Index(0), Index(13), Index(31)}) {
    const Eigen::VectorXcd col = op.column(k);
    for (Index j = 0; j < col.size(); ++j)
      CHECK(std::abs(std::abs(col[j]) - 1.0) < 1e-14);
    CHECK(op.column_squared_norm(k) == 24.0);
    CHECK(col.squaredNorm() == doctest::Approx(24.0).epsilon(1e-13));
  }
}

TEST_CASE("fft path requires the discrete model and an embeddable spectrum") {
  auto gamma = testutil::centered(16);
  const MeasurementOperator fft_op(draw_discrete(16, 1, 8, 1), gamma);
  CHECK(fft_op.path() == MeasurementOperator::Path::fft_subset);
  const MeasurementOperator cont_op(draw_continuous(1, 8, 1), gamma);
  CHECK(cont_op.path() == MeasurementOperator::Path::direct);
  CHECK_THROWS_AS(MeasurementOperator(draw_continuous(1, 8, 1), gamma,
                                      MeasurementOperator::Path::fft_subset),
                  std::invalid_argument);
  // Gamma = {-8..7} does not embed into Z_8: forced collision.
  const MeasurementOperator coarse(draw_discrete(8, 1, 8, 1), gamma);
  CHECK(coarse.path() == MeasurementOperator::Path::direct);
}

TEST_CASE("fft and direct paths agree to 1e-10") {
  struct Config { long m; int dim; Index n; Index d_line; };
  // m^d stays within 2^14; includes a non-power-of-two grid and d > 1.
  const Config configs[] = {
      {16, 1, 8, 16}, {100, 1, 40, 64}, {64, 2, 50, 0}, {12, 3, 30, 0}, {8192, 1, 128, 4096},
  };
  for (const auto& cfg : configs) {
    std::shared_ptr<const FrequencySet> gamma;
    if (cfg.dim == 1) {
      gamma = testutil::centered(cfg.d_line);
    } else {
      const int order = cfg.dim == 2 ? 3 : 2;  // 49 and 125 frequencies
      gamma = std::make_shared<FrequencySet>(FrequencySet::cube(cfg.dim, order));
    }
    const SamplingSet x = draw_discrete(cfg.m, cfg.dim, cfg.n, 17);
    const MeasurementOperator fast(x, gamma);
    REQUIRE(fast.path() == MeasurementOperator::Path::fft_subset);
    const MeasurementOperator direct(x, gamma, MeasurementOperator::Path::direct);

    Rng rng(5);
    const Eigen::VectorXcd c = random_cvec(gamma->size(), rng);
    CHECK((fast.apply(c) - direct.apply(c)).cwiseAbs().maxCoeff() <= 1e-10);
    const Eigen::VectorXcd r = random_cvec(cfg.n, rng);
    CHECK((fast.adjoint(r) - direct.adjoint(r)).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("apply matches the entrywise oracle on the continuous model") {
  auto gamma = std::make_shared<FrequencySet>(FrequencySet::cube(2, 2));
  const SamplingSet x = draw_continuous(2, 12, 23);
  const MeasurementOperator op(x, gamma);
  const Eigen::MatrixXcd a = dense_oracle(x, *gamma);
  Rng rng(7);
  const Eigen::VectorXcd c = random_cvec(gamma->size(), rng);
  CHECK((op.apply(c) - a * c).cwiseAbs().maxCoeff() <= 1e-10);
  const Eigen::VectorXcd r = random_cvec(12, rng);
  CHECK((op.adjoint(r) - a.adjoint() * r).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("adjoint identity <Fc, r> = <c, F*r>") {
  auto gamma = testutil::centered(64);
  for (bool discrete : {true, false}) {
    const SamplingSet x = discrete ? draw_discrete(64, 1, 20, 9) : draw_continuous(1, 20, 9);
    const MeasurementOperator op(x, gamma);
    Rng rng(31);
    for (int rep = 0; rep < 100; ++rep) {
      const Eigen::VectorXcd c = random_cvec(64, rng);
      const Eigen::VectorXcd r = random_cvec(20, rng);
      const Complex lhs = op.apply(c).dot(r);
      const Complex rhs = c.dot(op.adjoint(r));
      CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(lhs)));
    }
  }
}

TEST_CASE("full grid: F* F = N I") {
  auto gamma = testutil::centered(16);
  const SamplingSet x = draw_discrete_subset(16, 1, 16, 4);  // each point once
  const MeasurementOperator op(x, gamma);
  Rng rng(2);
  const Eigen::VectorXcd c = random_cvec(16, rng);
  const Eigen::VectorXcd back = op.adjoint(op.apply(c));
  CHECK((back - 16.0 * c).cwiseAbs().maxCoeff() <= 1e-10 * 16.0);
}

TEST_CASE("gram submatrix: pinned cases and the double-sum oracle") {
  auto gamma = testutil::centered(16);
  const SamplingSet x = draw_continuous(1, 12, 8);
  const MeasurementOperator op(x, gamma);

  const SupportOperator single(op, {5});
  const Eigen::MatrixXcd g1 = gram_submatrix(single);
  CHECK(g1.rows() == 1);
  CHECK(g1(0, 0) == Complex(12.0, 0.0));  // exactly N

  const SamplingSet full = draw_discrete_subset(16, 1, 16, 4);
  const MeasurementOperator fop(full, gamma);
  const SupportOperator sub_full(fop, {1, 6, 9});
  const Eigen::MatrixXcd gf = gram_submatrix(sub_full);
  CHECK((gf - 16.0 * Eigen::MatrixXcd::Identity(3, 3)).cwiseAbs().maxCoeff() <= 1e-10);

  const std::vector<Index> support{0, 3, 7, 11, 15};
  const SupportOperator sub(op, support);
  const Eigen::MatrixXcd g = gram_submatrix(sub);
  for (std::size_t a = 0; a < support.size(); ++a)
    for (std::size_t b = 0; b < support.size(); ++b) {
      Complex direct(0, 0);  // sum_j e^{i (k_b - k_a) x_j}
      for (Index j = 0; j < 12; ++j)
        direct += std::conj(testutil::entry_oracle(x, *gamma, j, support[a])) *
                  testutil::entry_oracle(x, *gamma, j, support[b]);
      CHECK(std::abs(g(static_cast<Index>(a), static_cast<Index>(b)) - direct) <= 1e-10);
    }
}

TEST_CASE("support operator validates and mirrors parent columns") {
  auto gamma = testutil::centered(8);
  const MeasurementOperator op(draw_continuous(1, 6, 1), gamma);
  CHECK_THROWS_AS(SupportOperator(op, {}), std::invalid_argument);
  CHECK_THROWS_AS(SupportOperator(op, {3, 1}), std::invalid_argument);
  CHECK_THROWS_AS(SupportOperator(op, {1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(SupportOperator(op, {1, 99}), std::invalid_argument);
  const SupportOperator sub(op, {2, 5});
  CHECK((sub.matrix().col(0) - op.column(2)).norm() == 0.0);
  CHECK((sub.matrix().col(1) - op.column(5)).norm() == 0.0);
}

TEST_CASE("dimension mismatches are rejected") {
  auto gamma = testutil::centered(8);
  const MeasurementOperator op(draw_continuous(1, 6, 1), gamma);
  Eigen::VectorXcd wrong(7);
  wrong.setZero();
  CHECK_THROWS_AS(op.apply(wrong), std::invalid_argument);
  CHECK_THROWS_AS(op.adjoint(wrong), std::invalid_argument);
}

}  // TEST_SUITE
