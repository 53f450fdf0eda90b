// Random sampling sets: the continuous model (uniform on [0,2pi]^d), the
// discrete model (uniform on the grid (2pi/m) Z_m^d, with or without
// replacement), and the Gaussian matrix ensemble used for comparison runs.

#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <iosfwd>

#include "strig/spectrum.hpp"

namespace strig {

enum class ModelKind { continuous, discrete, gaussian };

struct SamplingModel {
  ModelKind kind = ModelKind::continuous;
  int dim = 1;
  long grid = 0;             // discrete: grid size m >= 2
  bool with_replacement = true;  // discrete: repeated rows allowed

  static SamplingModel continuous_cube(int dim);
  static SamplingModel discrete_grid(long m, int dim, bool with_replacement = true);
};

/// An ordered list of sampling points in [0,2pi]^d together with the model
/// and seed that produced it. Immutable; duplicates are legal rows under the
/// with-replacement discrete model.
class SamplingSet {
 public:
  SamplingSet(Eigen::MatrixXd points, SamplingModel model, std::uint64_t seed);

  Index size() const noexcept { return points_.rows(); }
  int dim() const noexcept { return model_.dim; }
  const SamplingModel& model() const noexcept { return model_; }
  std::uint64_t seed() const noexcept { return seed_; }

  /// Row-major N x d matrix of coordinates in radians.
  const Eigen::MatrixXd& points() const noexcept { return points_; }

  double coord(Index j, int axis) const { return points_(j, axis); }

  /// One row per point, one column per coordinate, 17 significant digits.
  void write_csv(std::ostream& os) const;

 private:
  Eigen::MatrixXd points_;
  SamplingModel model_;
  std::uint64_t seed_;
};

/// N i.i.d. points uniform on [0,2pi]^d.
SamplingSet draw_continuous(int dim, Index n, std::uint64_t seed);

/// N i.i.d. points uniform on the grid (2pi/m) Z_m^d, with replacement.
SamplingSet draw_discrete(long m, int dim, Index n, std::uint64_t seed);

/// N distinct grid points chosen uniformly among all size-N subsets of the
/// m^d grid. Requires n <= m^d.
SamplingSet draw_discrete_subset(long m, int dim, Index n, std::uint64_t seed);

/// N x D real matrix with i.i.d. N(0, 1/N) entries.
Eigen::MatrixXd draw_gaussian_matrix(Index n, Index d, std::uint64_t seed);

}  // namespace strig
