#include <doctest.h>

#include <array>
#include <map>
#include <numbers>

#include "strig/spectrum.hpp"
#include "test_util.hpp"

using namespace strig;

namespace {

SparseCoefficients make_coeffs(std::shared_ptr<const FrequencySet> base,
                               std::vector<Index> support,
                               std::vector<Complex> values) {
  Eigen::VectorXcd v(static_cast<Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v[static_cast<Index>(i)] = values[i];
  return SparseCoefficients(std::move(base), std::move(support), std::move(v));
}

}  // namespace

TEST_SUITE("spectrum") {

TEST_CASE("canonical constructors and ordering") {
  const FrequencySet cube = FrequencySet::cube(2, 1);
  CHECK(cube.size() == 9);
  CHECK(cube.freq(0)[0] == -1);
  CHECK(cube.freq(0)[1] == -1);
  CHECK(cube.freq(8)[0] == 1);
  CHECK(cube.freq(8)[1] == 1);
  // lexicographic: (-1,-1),(-1,0),(-1,1),(0,-1),...
  CHECK(cube.freq(1)[0] == -1);
  CHECK(cube.freq(1)[1] == 0);
  CHECK(cube.freq(3)[0] == 0);
  CHECK(cube.freq(3)[1] == -1);

  const FrequencySet line = FrequencySet::centered_line(8);
  CHECK(line.size() == 8);
  CHECK(line.freq(0)[0] == -4);
  CHECK(line.freq(7)[0] == 3);
  const std::array<int, 1> probe{2};
  CHECK(line.index_of(probe) == 6);
  const std::array<int, 1> missing{4};
  CHECK(line.index_of(missing) == -1);

  CHECK_THROWS_AS(FrequencySet::centered_line(7), std::invalid_argument);
  CHECK_THROWS_AS(FrequencySet::from_list(1, {{1}, {1}}), std::invalid_argument);
  CHECK(FrequencySet::from_list(1, {{3}, {-1}, {0}}).freq(0)[0] == -1);

  CHECK(line.subset_of_grid(8));
  CHECK(line.subset_of_grid(16));
  CHECK_FALSE(line.subset_of_grid(4));  // -4 and 0 collide mod 4
}

TEST_CASE("evaluate on pinned examples") {
  auto base = testutil::centered(8);
  const std::array<double, 1> x_any{1.234};

  const TrigPolynomial constant{make_coeffs(base, {4}, {Complex(1, 0)})};  // k = 0
  CHECK(std::abs(evaluate(constant, x_any) - Complex(1, 0)) < 1e-15);

  const TrigPolynomial spike{make_coeffs(base, {7}, {Complex(1, 0)})};  // k = 3
  const std::array<double, 1> zero{0.0};
  CHECK(std::abs(evaluate(spike, zero) - Complex(1, 0)) < 1e-15);

  // c_{k=1} = c_{k=-1} = 1: f(x) = 2 cos(x); at pi/2 it vanishes.
  const TrigPolynomial cosine{make_coeffs(base, {3, 5}, {Complex(1, 0), Complex(1, 0)})};
  const std::array<double, 1> half_pi{std::numbers::pi / 2.0};
  CHECK(std::abs(evaluate(cosine, half_pi)) < 1e-12);

  const std::array<double, 2> bad_dim{0.0, 0.0};
  CHECK_THROWS_AS(evaluate(cosine, bad_dim), std::invalid_argument);
}

TEST_CASE("evaluate is linear in the coefficients") {
  auto base = testutil::centered(16);
  Rng rng(91);
  for (int rep = 0; rep < 20; ++rep) {
    auto a = random_sparse_coefficients(base, 5, CoefficientStyle::complex_gaussian, rng);
    auto b = random_sparse_coefficients(base, 7, CoefficientStyle::complex_gaussian, rng);
    const Complex alpha = rng.complex_normal(), beta = rng.complex_normal();

    const Eigen::VectorXcd combo_dense = alpha * a.dense() + beta * b.dense();
    std::vector<Index> support;
    std::vector<Complex> values;
    for (Index k = 0; k < combo_dense.size(); ++k)
      if (combo_dense[k] != Complex(0, 0)) {
        support.push_back(k);
        values.push_back(combo_dense[k]);
      }
    const TrigPolynomial combo{make_coeffs(base, support, values)};
    const TrigPolynomial pa{a}, pb{b};

    const std::array<double, 1> x{rng.uniform(0.0, 2.0 * std::numbers::pi)};
    const Complex lhs = evaluate(combo, x);
    const Complex rhs = alpha * evaluate(pa, x) + beta * evaluate(pb, x);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("frequency shift multiplies evaluation by a phase") {
  auto base = testutil::centered(16);
  Rng rng(17);
  const int shift = 5;
  for (int rep = 0; rep < 10; ++rep) {
    auto c = random_sparse_coefficients(base, 4, CoefficientStyle::complex_gaussian, rng);
    std::vector<std::vector<int>> shifted_freqs;
    for (Index k : c.support())
      shifted_freqs.push_back({base->freq(k)[0] + shift});
    auto shifted_base = std::make_shared<FrequencySet>(
        FrequencySet::from_list(1, shifted_freqs));
    // Shifting preserves order for a common offset, so values line up.
    std::vector<Index> support(shifted_freqs.size());
    for (std::size_t i = 0; i < shifted_freqs.size(); ++i) support[i] = static_cast<Index>(i);
    std::vector<Complex> values(c.values().data(), c.values().data() + c.values().size());
    const TrigPolynomial shifted{make_coeffs(shifted_base, support, values)};
    const TrigPolynomial original{c};

    const std::array<double, 1> x{rng.uniform(0.0, 2.0 * std::numbers::pi)};
    const Complex expected = std::polar(1.0, shift * x[0]) * evaluate(original, x);
    CHECK(std::abs(evaluate(shifted, x) - expected) <= 1e-12 * std::max(1.0, std::abs(expected)));
  }
}

TEST_CASE("dynamic range") {
  auto base = testutil::centered(8);
  const auto c = make_coeffs(base, {1, 3, 6},
                             {Complex(2, 0), Complex(0, 1), Complex(-0.5, 0)});
  CHECK(dynamic_range(c) == doctest::Approx(4.0).epsilon(1e-15));

  Rng rng(55);
  const auto g = random_sparse_coefficients(base, 6, CoefficientStyle::complex_gaussian, rng);
  double lo = 1e300, hi = 0.0;  // independent elementwise modulus scan
  for (Index i = 0; i < g.values().size(); ++i) {
    lo = std::min(lo, std::abs(g.values()[i]));
    hi = std::max(hi, std::abs(g.values()[i]));
  }
  CHECK(dynamic_range(g) == hi / lo);
}

TEST_CASE("random coefficients: support size, styles, determinism") {
  auto base = testutil::centered(8);
  Rng rng(3);
  const auto full = random_sparse_coefficients(base, 8, CoefficientStyle::complex_gaussian, rng);
  CHECK(full.sparsity() == 8);
  for (Index k = 0; k < 8; ++k) CHECK(full.support()[static_cast<std::size_t>(k)] == k);

  CHECK_THROWS_AS(
      random_sparse_coefficients(base, 9, CoefficientStyle::complex_gaussian, rng),
      std::invalid_argument);

  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng r(seed);
    const auto u = random_sparse_coefficients(base, 5, CoefficientStyle::unimodular_phase, r);
    CHECK(dynamic_range(u) == 1.0);  // exactly
  }

  Rng r1(77), r2(77);
  const auto a = random_sparse_coefficients(base, 4, CoefficientStyle::complex_gaussian, r1);
  const auto b = random_sparse_coefficients(base, 4, CoefficientStyle::complex_gaussian, r2);
  CHECK(a.support() == b.support());
  CHECK(a.values() == b.values());
}

TEST_CASE("support subsets are uniform") {
  auto base = testutil::centered(8);
  const int draws = 10000;
  std::map<std::vector<Index>, int> counts;
  Rng rng(2718);
  for (int t = 0; t < draws; ++t) {
    const auto c = random_sparse_coefficients(base, 2, CoefficientStyle::unimodular_phase, rng);
    counts[c.support()]++;
  }
  CHECK(counts.size() == 28);  // C(8,2)
  const double p = 1.0 / 28.0;
  const double band = 3.0 * std::sqrt(p * (1.0 - p) / draws);
  for (const auto& [subset, count] : counts) {
    CHECK(std::abs(double(count) / draws - p) <= band);
  }
}

}  // TEST_SUITE
