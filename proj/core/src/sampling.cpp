#include "strig/sampling.hpp"

#include <cmath>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "strig/csv.hpp"

namespace strig {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

SamplingModel SamplingModel::continuous_cube(int dim) {
  if (dim < 1) throw std::invalid_argument("SamplingModel: dimension must be >= 1");
  SamplingModel m;
  m.kind = ModelKind::continuous;
  m.dim = dim;
  return m;
}

SamplingModel SamplingModel::discrete_grid(long grid, int dim, bool with_replacement) {
  if (dim < 1) throw std::invalid_argument("SamplingModel: dimension must be >= 1");
  if (grid < 2) throw std::invalid_argument("SamplingModel: grid size must be >= 2");
  SamplingModel m;
  m.kind = ModelKind::discrete;
  m.dim = dim;
  m.grid = grid;
  m.with_replacement = with_replacement;
  return m;
}

SamplingSet::SamplingSet(Eigen::MatrixXd points, SamplingModel model,
                         std::uint64_t seed)
    : points_(std::move(points)), model_(model), seed_(seed) {
  if (points_.rows() < 1)
    throw std::invalid_argument("SamplingSet: need at least one point");
  if (points_.cols() != model_.dim)
    throw std::invalid_argument("SamplingSet: point dimension mismatch");
}

void SamplingSet::write_csv(std::ostream& os) const {
  for (Index j = 0; j < size(); ++j) {
    for (int i = 0; i < dim(); ++i) {
      if (i) os << ',';
      os << fmt_double(points_(j, i));
    }
    os << '\n';
  }
}

SamplingSet draw_continuous(int dim, Index n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("draw_continuous: need n >= 1");
  if (dim < 1) throw std::invalid_argument("draw_continuous: need dim >= 1");
  Rng rng(seed);
  Eigen::MatrixXd pts(n, dim);
  for (Index j = 0; j < n; ++j)
    for (int i = 0; i < dim; ++i) pts(j, i) = rng.uniform(0.0, kTwoPi);
  return SamplingSet(std::move(pts), SamplingModel::continuous_cube(dim), seed);
}

SamplingSet draw_discrete(long m, int dim, Index n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("draw_discrete: need n >= 1");
  if (m < 2) throw std::invalid_argument("draw_discrete: need grid size m >= 2");
  Rng rng(seed);
  Eigen::MatrixXd pts(n, dim);
  for (Index j = 0; j < n; ++j)
    for (int i = 0; i < dim; ++i) {
      const auto g = rng.below(static_cast<std::uint64_t>(m));
      pts(j, i) = kTwoPi * double(g) / double(m);
    }
  return SamplingSet(std::move(pts), SamplingModel::discrete_grid(m, dim, true), seed);
}

SamplingSet draw_discrete_subset(long m, int dim, Index n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("draw_discrete_subset: need n >= 1");
  if (m < 2) throw std::invalid_argument("draw_discrete_subset: need grid size m >= 2");
  double total_d = 1.0;
  for (int i = 0; i < dim; ++i) total_d *= double(m);
  if (double(n) > total_d)
    throw std::invalid_argument("draw_discrete_subset: n exceeds grid cardinality");
  const std::uint64_t total = [&] {
    std::uint64_t t = 1;
    for (int i = 0; i < dim; ++i) t *= static_cast<std::uint64_t>(m);
    return t;
  }();

  // Sparse partial Fisher-Yates over the flattened grid: only touched slots
  // are stored, so huge grids cost O(n) memory.
  Rng rng(seed);
  std::unordered_map<std::uint64_t, std::uint64_t> perm;
  auto slot = [&perm](std::uint64_t i) {
    auto it = perm.find(i);
    return it == perm.end() ? i : it->second;
  };
  Eigen::MatrixXd pts(n, dim);
  for (Index r = 0; r < n; ++r) {
    const std::uint64_t i = static_cast<std::uint64_t>(r);
    const std::uint64_t j = i + rng.below(total - i);
    const std::uint64_t vi = slot(i), vj = slot(j);
    perm[i] = vj;
    perm[j] = vi;
    std::uint64_t flat = vj;
    for (int axis = dim - 1; axis >= 0; --axis) {
      pts(r, axis) = kTwoPi * double(flat % static_cast<std::uint64_t>(m)) / double(m);
      flat /= static_cast<std::uint64_t>(m);
    }
  }
  return SamplingSet(std::move(pts), SamplingModel::discrete_grid(m, dim, false), seed);
}

Eigen::MatrixXd draw_gaussian_matrix(Index n, Index d, std::uint64_t seed) {
  if (n < 1 || d < 1)
    throw std::invalid_argument("draw_gaussian_matrix: need n, d >= 1");
  Rng rng(seed);
  const double scale = 1.0 / std::sqrt(double(n));
  Eigen::MatrixXd a(n, d);
  for (Index j = 0; j < n; ++j)
    for (Index k = 0; k < d; ++k) a(j, k) = scale * rng.normal();
  return a;
}

}  // namespace strig
