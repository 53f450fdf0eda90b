// The implicit measurement operator F_X with entries e^{i k.x_j}, its
// support-restricted submatrices and Gram matrices, plus a dense operator
// used for the Gaussian ensemble and explicitly materialized matrices.

#pragma once

#include <Eigen/Core>
#include <memory>
#include <vector>

#include "strig/sampling.hpp"
#include "strig/spectrum.hpp"

namespace strig {

/// Abstract N x D complex linear map with column access. All operations are
/// pure and reentrant; implementations are immutable after construction.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;

  virtual Index rows() const noexcept = 0;  // N, number of samples
  virtual Index cols() const noexcept = 0;  // D, number of frequencies

  virtual void apply_into(const Eigen::VectorXcd& c, Eigen::VectorXcd& out) const = 0;
  virtual void adjoint_into(const Eigen::VectorXcd& r, Eigen::VectorXcd& out) const = 0;
  virtual Eigen::VectorXcd column(Index k) const = 0;

  /// Squared Euclidean column norm. Exact (= N as a double) for Fourier
  /// columns, computed from entries otherwise.
  virtual double column_squared_norm(Index k) const = 0;

  Eigen::VectorXcd apply(const Eigen::VectorXcd& c) const {
    Eigen::VectorXcd out;
    apply_into(c, out);
    return out;
  }
  Eigen::VectorXcd adjoint(const Eigen::VectorXcd& r) const {
    Eigen::VectorXcd out;
    adjoint_into(r, out);
    return out;
  }

  /// Explicit N x D matrix; intended for small instances and oracles.
  Eigen::MatrixXcd dense() const;
};

/// F_X for a sampling set X and frequency set Gamma. Uses a zero-padded FFT
/// over the m^d grid when the model is discrete and Gamma embeds into Z_m^d
/// (fft_subset), and exact nonequispaced summation otherwise (direct).
/// Under the discrete model all phases are computed from integer products
/// reduced mod m, so entries are exact unit-modulus roots of unity.
class MeasurementOperator final : public LinearOperator {
 public:
  enum class Path { fft_subset, direct };

  MeasurementOperator(SamplingSet sampling,
                      std::shared_ptr<const FrequencySet> frequencies);
  /// Force a specific path (used by tests and timing comparisons). Requesting
  /// fft_subset when ineligible throws.
  MeasurementOperator(SamplingSet sampling,
                      std::shared_ptr<const FrequencySet> frequencies,
                      Path forced);

  Index rows() const noexcept override { return sampling_.size(); }
  Index cols() const noexcept override { return frequencies_->size(); }
  Path path() const noexcept { return path_; }
  const SamplingSet& sampling() const noexcept { return sampling_; }
  const FrequencySet& frequencies() const noexcept { return *frequencies_; }
  std::shared_ptr<const FrequencySet> frequencies_ptr() const noexcept {
    return frequencies_;
  }

  void apply_into(const Eigen::VectorXcd& c, Eigen::VectorXcd& out) const override;
  void adjoint_into(const Eigen::VectorXcd& r, Eigen::VectorXcd& out) const override;
  Eigen::VectorXcd column(Index k) const override;
  double column_squared_norm(Index) const noexcept override {
    return double(rows());
  }

 private:
  void init(Path forced, bool auto_path);
  void apply_direct(const Eigen::VectorXcd& c, Eigen::VectorXcd& out) const;
  void adjoint_direct(const Eigen::VectorXcd& r, Eigen::VectorXcd& out) const;
  void apply_fft(const Eigen::VectorXcd& c, Eigen::VectorXcd& out) const;
  void adjoint_fft(const Eigen::VectorXcd& r, Eigen::VectorXcd& out) const;

  SamplingSet sampling_;
  std::shared_ptr<const FrequencySet> frequencies_;
  Path path_ = Path::direct;

  // Discrete-model machinery (empty under the continuous model).
  long grid_ = 0;                               // m
  Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic> sample_coords_;  // N x d
  Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic> freq_residues_;  // D x d
  std::vector<Complex> roots_;                  // e^{2pi i t/m}, t = 0..m-1
  std::vector<std::size_t> sample_flat_;        // fft path: grid index per sample
  std::vector<std::size_t> freq_flat_;          // fft path: grid index per column
  std::vector<int> fft_dims_;

  bool contiguous_1d_ = false;  // dim 1 and consecutive integer frequencies
};

/// Dense N x D operator. Wraps the Gaussian ensemble and explicit
/// materializations of F_X used in timing comparisons.
class DenseOperator final : public LinearOperator {
 public:
  explicit DenseOperator(Eigen::MatrixXcd matrix);
  explicit DenseOperator(const Eigen::MatrixXd& real_matrix);

  Index rows() const noexcept override { return matrix_.rows(); }
  Index cols() const noexcept override { return matrix_.cols(); }
  const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }

  void apply_into(const Eigen::VectorXcd& c, Eigen::VectorXcd& out) const override;
  void adjoint_into(const Eigen::VectorXcd& r, Eigen::VectorXcd& out) const override;
  Eigen::VectorXcd column(Index k) const override { return matrix_.col(k); }
  double column_squared_norm(Index k) const noexcept override {
    return col_sq_[k];
  }

 private:
  Eigen::MatrixXcd matrix_;
  Eigen::VectorXd col_sq_;
};

/// The restriction F_TX of a parent operator to columns indexed by a support
/// set T, materialized as a dense N x |T| matrix in canonical column order.
/// The parent must outlive the SupportOperator.
class SupportOperator {
 public:
  SupportOperator(const LinearOperator& parent, std::vector<Index> support);

  const LinearOperator& parent() const noexcept { return *parent_; }
  const std::vector<Index>& support() const noexcept { return support_; }
  Index size() const noexcept { return static_cast<Index>(support_.size()); }
  const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }

 private:
  const LinearOperator* parent_;
  std::vector<Index> support_;
  Eigen::MatrixXcd matrix_;
};

/// F_TX^* F_TX, Hermitian PSD with diagonal entries exactly equal to the
/// parent's squared column norms (N for Fourier columns). Supports of size
/// greater than 4096 are refused; use operator access instead.
Eigen::MatrixXcd gram_submatrix(const SupportOperator& sub);

}  // namespace strig
