#include "strig/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>
#include <unordered_set>

namespace strig {

namespace {

bool lex_less(const int* a, const int* b, int dim) {
  return std::lexicographical_compare(a, a + dim, b, b + dim);
}

}  // namespace

FrequencySet::FrequencySet(int dim, std::vector<int> flat)
    : dim_(dim), flat_(std::move(flat)) {
  if (dim_ < 1) throw std::invalid_argument("FrequencySet: dimension must be >= 1");
  if (flat_.empty() || flat_.size() % dim_ != 0)
    throw std::invalid_argument("FrequencySet: empty or ragged frequency list");
}

FrequencySet FrequencySet::cube(int dim, int order) {
  if (dim < 1 || order < 0)
    throw std::invalid_argument("FrequencySet::cube: bad dimension or order");
  const long side = 2L * order + 1;
  long total = 1;
  for (int i = 0; i < dim; ++i) total *= side;
  std::vector<int> flat;
  flat.reserve(static_cast<std::size_t>(total) * dim);
  std::vector<int> f(dim, -order);
  for (long n = 0; n < total; ++n) {
    flat.insert(flat.end(), f.begin(), f.end());
    for (int i = dim - 1; i >= 0; --i) {
      if (++f[i] <= order) break;
      f[i] = -order;
    }
  }
  return FrequencySet(dim, std::move(flat));
}

FrequencySet FrequencySet::centered_line(Index size) {
  if (size < 2 || size % 2 != 0)
    throw std::invalid_argument("FrequencySet::centered_line: size must be even and >= 2");
  std::vector<int> flat(static_cast<std::size_t>(size));
  std::iota(flat.begin(), flat.end(), static_cast<int>(-size / 2));
  return FrequencySet(1, std::move(flat));
}

FrequencySet FrequencySet::from_list(int dim,
                                     const std::vector<std::vector<int>>& freqs) {
  std::vector<std::vector<int>> sorted = freqs;
  for (const auto& f : sorted)
    if (static_cast<int>(f.size()) != dim)
      throw std::invalid_argument("FrequencySet::from_list: frequency of wrong dimension");
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw std::invalid_argument("FrequencySet::from_list: duplicate frequency");
  std::vector<int> flat;
  flat.reserve(sorted.size() * dim);
  for (const auto& f : sorted) flat.insert(flat.end(), f.begin(), f.end());
  return FrequencySet(dim, std::move(flat));
}

Index FrequencySet::index_of(std::span<const int> f) const {
  if (static_cast<int>(f.size()) != dim_) return -1;
  Index lo = 0, hi = size();
  while (lo < hi) {
    const Index mid = (lo + hi) / 2;
    if (lex_less(flat_.data() + mid * dim_, f.data(), dim_))
      lo = mid + 1;
    else
      hi = mid;
  }
  if (lo < size() &&
      std::equal(f.begin(), f.end(), flat_.data() + lo * dim_))
    return lo;
  return -1;
}

bool FrequencySet::subset_of_grid(long m) const {
  if (m < 2) return false;
  std::set<std::vector<long>> residues;
  for (Index k = 0; k < size(); ++k) {
    std::vector<long> r(dim_);
    for (int i = 0; i < dim_; ++i) {
      long v = flat_[k * dim_ + i] % m;
      if (v < 0) v += m;
      r[i] = v;
    }
    if (!residues.insert(std::move(r)).second) return false;
  }
  return true;
}

SparseCoefficients::SparseCoefficients(std::shared_ptr<const FrequencySet> base,
                                       std::vector<Index> support,
                                       Eigen::VectorXcd values)
    : base_(std::move(base)), support_(std::move(support)), values_(std::move(values)) {
  if (!base_) throw std::invalid_argument("SparseCoefficients: null base");
  if (static_cast<Index>(support_.size()) != values_.size())
    throw std::invalid_argument("SparseCoefficients: support/value size mismatch");
  if (!std::is_sorted(support_.begin(), support_.end()) ||
      std::adjacent_find(support_.begin(), support_.end()) != support_.end())
    throw std::invalid_argument("SparseCoefficients: support must be sorted and unique");
  if (!support_.empty() &&
      (support_.front() < 0 || support_.back() >= base_->size()))
    throw std::invalid_argument("SparseCoefficients: support index out of range");
  for (Index i = 0; i < values_.size(); ++i)
    if (values_[i] == Complex(0.0, 0.0))
      throw std::invalid_argument("SparseCoefficients: zero value on support");
}

Eigen::VectorXcd SparseCoefficients::dense() const {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(base_->size());
  for (std::size_t i = 0; i < support_.size(); ++i)
    out[support_[i]] = values_[static_cast<Index>(i)];
  return out;
}

double dynamic_range(const SparseCoefficients& c) {
  if (c.sparsity() == 0)
    throw std::invalid_argument("dynamic_range: empty support");
  double lo = std::abs(c.values()[0]), hi = lo;
  for (Index i = 1; i < c.values().size(); ++i) {
    const double a = std::abs(c.values()[i]);
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  return hi / lo;
}

SparseCoefficients random_sparse_coefficients(
    std::shared_ptr<const FrequencySet> base, Index m, CoefficientStyle style,
    Rng& rng) {
  const Index d = base->size();
  if (m < 0 || m > d)
    throw std::invalid_argument("random_sparse_coefficients: need 0 <= m <= |Gamma|");

  // Partial Fisher-Yates over the column indices: after m swaps the prefix is
  // a uniform ordered sample without replacement, hence a uniform subset.
  std::vector<Index> idx(static_cast<std::size_t>(d));
  std::iota(idx.begin(), idx.end(), Index{0});
  for (Index i = 0; i < m; ++i) {
    const Index j = i + static_cast<Index>(rng.below(static_cast<std::uint64_t>(d - i)));
    std::swap(idx[i], idx[j]);
  }
  std::vector<Index> support(idx.begin(), idx.begin() + m);
  std::sort(support.begin(), support.end());

  Eigen::VectorXcd values(m);
  for (Index i = 0; i < m; ++i) {
    if (style == CoefficientStyle::complex_gaussian) {
      Complex v = rng.complex_normal();
      while (v == Complex(0.0, 0.0)) v = rng.complex_normal();
      values[i] = v;
    } else {
      const double phi = rng.uniform(0.0, 2.0 * std::numbers::pi);
      Complex v(std::cos(phi), std::sin(phi));
      // Renormalize until the modulus rounds to exactly 1, so the unimodular
      // style has dynamic range 1 bit-for-bit.
      for (int it = 0; it < 4 && std::abs(v) != 1.0; ++it) v /= std::abs(v);
      values[i] = v;
    }
  }
  return SparseCoefficients(std::move(base), std::move(support), std::move(values));
}

Complex evaluate(const TrigPolynomial& poly, std::span<const double> x) {
  const FrequencySet& gamma = poly.coefficients.base();
  if (static_cast<int>(x.size()) != gamma.dim())
    throw std::invalid_argument("evaluate: point dimension mismatch");
  Complex sum(0.0, 0.0);
  const auto& support = poly.coefficients.support();
  const auto& values = poly.coefficients.values();
  for (std::size_t i = 0; i < support.size(); ++i) {
    const auto f = gamma.freq(support[i]);
    double phase = 0.0;
    for (int j = 0; j < gamma.dim(); ++j) phase += f[j] * x[j];
    sum += values[static_cast<Index>(i)] * Complex(std::cos(phase), std::sin(phase));
  }
  return sum;
}

}  // namespace strig
