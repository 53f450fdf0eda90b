// Frequency sets, sparse coefficient vectors, and trigonometric polynomials.

#pragma once

#include <Eigen/Core>
#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "strig/rng.hpp"

namespace strig {

using Complex = std::complex<double>;
using Index = Eigen::Index;

/// A finite set of integer frequencies in Z^d, stored in canonical
/// (lexicographic) order. Column indices of every measurement matrix built on
/// top of a FrequencySet follow this order.
class FrequencySet {
 public:
  /// The cube {-order, ..., order}^dim.
  static FrequencySet cube(int dim, int order);

  /// The univariate set {-size/2, ..., size/2 - 1}; size must be even.
  static FrequencySet centered_line(Index size);

  /// Arbitrary frequency list; sorted lexicographically, duplicates rejected.
  static FrequencySet from_list(int dim,
                                const std::vector<std::vector<int>>& freqs);

  int dim() const noexcept { return dim_; }
  Index size() const noexcept { return static_cast<Index>(flat_.size()) / dim_; }

  /// The dim() integer components of frequency k.
  std::span<const int> freq(Index k) const {
    return {flat_.data() + k * dim_, static_cast<std::size_t>(dim_)};
  }

  /// Column index of a frequency, or -1 if not a member.
  Index index_of(std::span<const int> f) const;

  /// True iff the residues mod m are pairwise distinct, i.e. the set embeds
  /// into Z_m^d and grid-aligned samples make the columns DFT columns.
  bool subset_of_grid(long m) const;

  bool operator==(const FrequencySet& other) const {
    return dim_ == other.dim_ && flat_ == other.flat_;
  }

 private:
  FrequencySet(int dim, std::vector<int> flat);

  int dim_;
  std::vector<int> flat_;  // size() * dim_ components, lexicographic rows
};

/// Complex coefficients supported on a subset of a FrequencySet. Values on
/// the support are nonzero; everything off-support is identically zero.
class SparseCoefficients {
 public:
  SparseCoefficients(std::shared_ptr<const FrequencySet> base,
                     std::vector<Index> support, Eigen::VectorXcd values);

  const FrequencySet& base() const noexcept { return *base_; }
  std::shared_ptr<const FrequencySet> base_ptr() const noexcept { return base_; }
  const std::vector<Index>& support() const noexcept { return support_; }
  const Eigen::VectorXcd& values() const noexcept { return values_; }
  Index sparsity() const noexcept { return static_cast<Index>(support_.size()); }

  /// Dense length-D coefficient vector in canonical column order.
  Eigen::VectorXcd dense() const;

 private:
  std::shared_ptr<const FrequencySet> base_;
  std::vector<Index> support_;   // sorted canonical column indices
  Eigen::VectorXcd values_;      // one nonzero value per support entry
};

/// max |c_k| / min |c_k| over the support. Throws on empty support.
double dynamic_range(const SparseCoefficients& c);

enum class CoefficientStyle {
  complex_gaussian,  // Re and Im each N(0,1)
  unimodular_phase,  // |c_k| = 1, phase uniform on [0, 2pi)
};

/// Support drawn uniformly among the size-m subsets (partial Fisher-Yates),
/// values drawn per style. Deterministic given the rng state.
SparseCoefficients random_sparse_coefficients(
    std::shared_ptr<const FrequencySet> base, Index m, CoefficientStyle style,
    Rng& rng);

struct TrigPolynomial {
  SparseCoefficients coefficients;
};

/// Direct evaluation f(x) = sum_{k in T} c_k e^{i k.x} for x in [0,2pi]^d.
Complex evaluate(const TrigPolynomial& poly, std::span<const double> x);

}  // namespace strig
