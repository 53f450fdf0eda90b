#include <doctest.h>

#include <numbers>
#include <set>
#include <sstream>

#include "strig/rng.hpp"
#include "strig/sampling.hpp"

using namespace strig;

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

TEST_SUITE("rng") {

TEST_CASE("streams are deterministic and label-separated") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
  CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
}

TEST_CASE("uniform and normal moments") {
  Rng rng(7);
  const int n = 100000;
  double mean = 0.0;
  for (int i = 0; i < n; ++i) mean += rng.uniform();
  mean /= n;
  CHECK(std::abs(mean - 0.5) < 3.0 / std::sqrt(12.0 * n));

  double nm = 0.0, nv = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal();
    nm += z;
    nv += z * z;
  }
  nm /= n;
  nv /= n;
  CHECK(std::abs(nm) < 3.0 / std::sqrt(double(n)));
  CHECK(std::abs(nv - 1.0) < 3.0 * std::sqrt(2.0 / n));
}

}  // TEST_SUITE

TEST_SUITE("sampling") {

TEST_CASE("continuous draws: range, determinism, mean") {
  const SamplingSet one = draw_continuous(1, 1, 9);
  CHECK(one.size() == 1);
  CHECK(one.coord(0, 0) >= 0.0);
  CHECK(one.coord(0, 0) < kTwoPi);

  const SamplingSet a = draw_continuous(2, 50, 1234), b = draw_continuous(2, 50, 1234);
  CHECK(a.points() == b.points());

  const int n = 100000;
  const SamplingSet big = draw_continuous(1, n, 5);
  const double mean = big.points().col(0).mean();
  const double band = 3.0 * (kTwoPi / std::sqrt(12.0)) / std::sqrt(double(n));
  CHECK(std::abs(mean - std::numbers::pi) <= band);

  CHECK_THROWS_AS(draw_continuous(1, 0, 1), std::invalid_argument);
}

TEST_CASE("discrete draws: grid membership, proportions, collisions") {
  const SamplingSet tiny = draw_discrete(2, 1, 4, 11);
  for (Index j = 0; j < 4; ++j) {
    const double x = tiny.coord(j, 0);
    CHECK((x == 0.0 || x == doctest::Approx(std::numbers::pi).epsilon(1e-15)));
  }

  const int n = 100000;
  const SamplingSet big = draw_discrete(4, 1, n, 77);
  int counts[4] = {0, 0, 0, 0};
  for (Index j = 0; j < n; ++j)
    counts[std::lround(big.coord(j, 0) * 4 / kTwoPi)]++;
  const double band = 3.0 * std::sqrt(0.25 * 0.75 / n);
  for (int g = 0; g < 4; ++g) CHECK(std::abs(counts[g] / double(n) - 0.25) <= band);

  // With 50 draws from an 8-point grid the collision probability
  // 1 - prod_j (1 - j/8) is exactly 1; every seed must show a duplicate.
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const SamplingSet s = draw_discrete(8, 1, 50, seed);
    std::set<long> seen;
    bool dup = false;
    for (Index j = 0; j < 50; ++j)
      dup |= !seen.insert(std::lround(s.coord(j, 0) * 8 / kTwoPi)).second;
    CHECK(dup);
  }

  CHECK_THROWS_AS(draw_discrete(1, 1, 4, 0), std::invalid_argument);
}

TEST_CASE("discrete coordinates are exact grid multiples") {
  const SamplingSet s = draw_discrete(12, 2, 64, 3);
  for (Index j = 0; j < s.size(); ++j)
    for (int i = 0; i < 2; ++i) {
      const long g = std::lround(s.coord(j, i) * 12 / kTwoPi);
      CHECK(s.coord(j, i) == kTwoPi * double(g) / 12.0);
    }
}

TEST_CASE("distinct-subset draws have no repeated rows") {
  const SamplingSet s = draw_discrete_subset(16, 1, 16, 21);  // the full grid
  std::set<long> seen;
  for (Index j = 0; j < 16; ++j)
    CHECK(seen.insert(std::lround(s.coord(j, 0) * 16 / kTwoPi)).second);
  CHECK(seen.size() == 16);

  CHECK_THROWS_AS(draw_discrete_subset(4, 1, 5, 0), std::invalid_argument);

  // Nesting: the first n points agree between draws of different sizes.
  const SamplingSet small = draw_discrete_subset(64, 1, 10, 8);
  const SamplingSet large = draw_discrete_subset(64, 1, 20, 8);
  CHECK(small.points() == large.points().topRows(10));
}

TEST_CASE("gaussian ensemble column norms and determinism") {
  const Index n = 64, d = 1000;
  const Eigen::MatrixXd a = draw_gaussian_matrix(n, d, 99);
  CHECK(a == draw_gaussian_matrix(n, d, 99));
  const double mean_sq = a.colwise().squaredNorm().mean();
  CHECK(std::abs(mean_sq - 1.0) < 0.05);

  // N = D = 1: a single N(0,1) draw.
  const Eigen::MatrixXd single = draw_gaussian_matrix(1, 1, 5);
  Rng oracle(5);
  CHECK(single(0, 0) == oracle.normal());
}

TEST_CASE("csv serialization round-trips at 17 digits") {
  const SamplingSet s = draw_continuous(2, 5, 31);
  std::ostringstream os;
  s.write_csv(os);
  std::istringstream is(os.str());
  std::string line;
  Index j = 0;
  while (std::getline(is, line)) {
    const auto comma = line.find(',');
    CHECK(std::stod(line.substr(0, comma)) == s.coord(j, 0));
    CHECK(std::stod(line.substr(comma + 1)) == s.coord(j, 1));
    ++j;
  }
  CHECK(j == 5);
}

}  // TEST_SUITE
