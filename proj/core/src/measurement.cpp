#include "strig/measurement.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "strig/fft_grid.hpp"

namespace strig {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr Index kRecurrenceRefresh = 512;  // bounds phase-recurrence drift
constexpr Index kMaxExplicitGram = 4096;

Complex unit_phase(double phase) { return {std::cos(phase), std::sin(phase)}; }

}  // namespace

Eigen::MatrixXcd LinearOperator::dense() const {
  Eigen::MatrixXcd a(rows(), cols());
  for (Index k = 0; k < cols(); ++k) a.col(k) = column(k);
  return a;
}

MeasurementOperator::MeasurementOperator(
    SamplingSet sampling, std::shared_ptr<const FrequencySet> frequencies)
    : sampling_(std::move(sampling)), frequencies_(std::move(frequencies)) {
  init(Path::direct, /*auto_path=*/true);
}

MeasurementOperator::MeasurementOperator(
    SamplingSet sampling, std::shared_ptr<const FrequencySet> frequencies,
    Path forced)
    : sampling_(std::move(sampling)), frequencies_(std::move(frequencies)) {
  init(forced, /*auto_path=*/false);
}

void MeasurementOperator::init(Path forced, bool auto_path) {
  if (!frequencies_) throw std::invalid_argument("MeasurementOperator: null frequency set");
  if (sampling_.dim() != frequencies_->dim())
    throw std::invalid_argument("MeasurementOperator: sampling/frequency dimension mismatch");

  const int d = frequencies_->dim();
  const Index n = sampling_.size();
  const Index dd = frequencies_->size();

  // Consecutive univariate frequencies admit an O(1)-per-entry phase
  // recurrence in both the discrete and continuous direct paths.
  if (d == 1) {
    contiguous_1d_ = true;
    const int k0 = frequencies_->freq(0)[0];
    for (Index k = 0; k < dd; ++k)
      if (frequencies_->freq(k)[0] != k0 + static_cast<int>(k)) {
        contiguous_1d_ = false;
        break;
      }
  }

  const bool discrete = sampling_.model().kind == ModelKind::discrete;
  if (discrete) {
    grid_ = sampling_.model().grid;
    sample_coords_.resize(n, d);
    for (Index j = 0; j < n; ++j)
      for (int i = 0; i < d; ++i) {
        const double x = sampling_.coord(j, i);
        const long g = std::lround(x * double(grid_) / kTwoPi) % grid_;
        if (std::abs(x - kTwoPi * double(g) / double(grid_)) > 1e-9)
          throw std::invalid_argument("MeasurementOperator: discrete point off grid");
        sample_coords_(j, i) = g < 0 ? g + grid_ : g;
      }
    freq_residues_.resize(dd, d);
    for (Index k = 0; k < dd; ++k) {
      const auto f = frequencies_->freq(k);
      for (int i = 0; i < d; ++i) {
        long r = f[i] % grid_;
        freq_residues_(k, i) = r < 0 ? r + grid_ : r;
      }
    }
    roots_.resize(static_cast<std::size_t>(grid_));
    for (long t = 0; t < grid_; ++t)
      roots_[static_cast<std::size_t>(t)] = unit_phase(kTwoPi * double(t) / double(grid_));
  }

  const bool fft_eligible = discrete && frequencies_->subset_of_grid(grid_);
  if (auto_path) {
    path_ = fft_eligible ? Path::fft_subset : Path::direct;
  } else {
    if (forced == Path::fft_subset && !fft_eligible)
      throw std::invalid_argument(
          "MeasurementOperator: fft_subset requires the discrete model and Gamma in Z_m^d");
    path_ = forced;
  }

  if (path_ == Path::fft_subset) {
    fft_dims_.assign(static_cast<std::size_t>(d), static_cast<int>(grid_));
    auto flatten = [this, d](const Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic>& coords,
                             Index row) {
      std::size_t flat = 0;
      for (int i = 0; i < d; ++i)
        flat = flat * static_cast<std::size_t>(grid_) +
               static_cast<std::size_t>(coords(row, i));
      return flat;
    };
    sample_flat_.resize(static_cast<std::size_t>(n));
    for (Index j = 0; j < n; ++j) sample_flat_[static_cast<std::size_t>(j)] = flatten(sample_coords_, j);
    freq_flat_.resize(static_cast<std::size_t>(dd));
    for (Index k = 0; k < dd; ++k) freq_flat_[static_cast<std::size_t>(k)] = flatten(freq_residues_, k);
  }
}

void MeasurementOperator::apply_into(const Eigen::VectorXcd& c,
                                     Eigen::VectorXcd& out) const {
  if (c.size() != cols())
    throw std::invalid_argument("MeasurementOperator::apply: coefficient length mismatch");
  if (path_ == Path::fft_subset)
    apply_fft(c, out);
  else
    apply_direct(c, out);
}

void MeasurementOperator::adjoint_into(const Eigen::VectorXcd& r,
                                       Eigen::VectorXcd& out) const {
  if (r.size() != rows())
    throw std::invalid_argument("MeasurementOperator::adjoint: sample length mismatch");
  if (path_ == Path::fft_subset)
    adjoint_fft(r, out);
  else
    adjoint_direct(r, out);
}

void MeasurementOperator::apply_fft(const Eigen::VectorXcd& c,
                                    Eigen::VectorXcd& out) const {
  std::size_t total = 1;
  for (int m : fft_dims_) total *= static_cast<std::size_t>(m);
  std::vector<Complex> grid(total, Complex(0, 0)), spectrum(total);
  for (Index k = 0; k < cols(); ++k) grid[freq_flat_[static_cast<std::size_t>(k)]] += c[k];
  detail::grid_dft(fft_dims_, +1, grid.data(), spectrum.data());
  out.resize(rows());
  for (Index j = 0; j < rows(); ++j) out[j] = spectrum[sample_flat_[static_cast<std::size_t>(j)]];
}

void MeasurementOperator::adjoint_fft(const Eigen::VectorXcd& r,
                                      Eigen::VectorXcd& out) const {
  std::size_t total = 1;
  for (int m : fft_dims_) total *= static_cast<std::size_t>(m);
  std::vector<Complex> bins(total, Complex(0, 0)), spectrum(total);
  for (Index j = 0; j < rows(); ++j) bins[sample_flat_[static_cast<std::size_t>(j)]] += r[j];
  detail::grid_dft(fft_dims_, -1, bins.data(), spectrum.data());
  out.resize(cols());
  for (Index k = 0; k < cols(); ++k) out[k] = spectrum[freq_flat_[static_cast<std::size_t>(k)]];
}

void MeasurementOperator::apply_direct(const Eigen::VectorXcd& c,
                                       Eigen::VectorXcd& out) const {
  const Index n = rows(), dd = cols();
  const int d = frequencies_->dim();
  out.resize(n);

  if (grid_ > 0) {
    // Integer phases reduced mod m: entries are exact roots of unity.
    for (Index j = 0; j < n; ++j) {
      Complex acc(0, 0);
      if (contiguous_1d_) {
        const long step = sample_coords_(j, 0);
        long t = (freq_residues_(0, 0) * step) % grid_;
        for (Index k = 0; k < dd; ++k) {
          acc += c[k] * roots_[static_cast<std::size_t>(t)];
          t += step;
          if (t >= grid_) t -= grid_;
        }
      } else {
        for (Index k = 0; k < dd; ++k) {
          long t = 0;
          for (int i = 0; i < d; ++i) t += freq_residues_(k, i) * sample_coords_(j, i);
          acc += c[k] * roots_[static_cast<std::size_t>(t % grid_)];
        }
      }
      out[j] = acc;
    }
    return;
  }

  // Continuous model: nonequispaced sum. The univariate contiguous case uses
  // a phase recurrence refreshed every kRecurrenceRefresh terms.
  for (Index j = 0; j < n; ++j) {
    Complex acc(0, 0);
    if (contiguous_1d_) {
      const double x = sampling_.coord(j, 0);
      const double k0 = double(frequencies_->freq(0)[0]);
      const Complex w = unit_phase(x);
      Complex p = unit_phase(k0 * x);
      for (Index k = 0; k < dd; ++k) {
        if (k > 0 && k % kRecurrenceRefresh == 0) p = unit_phase((k0 + double(k)) * x);
        acc += c[k] * p;
        p *= w;
      }
    } else {
      for (Index k = 0; k < dd; ++k) {
        const auto f = frequencies_->freq(k);
        double phase = 0.0;
        for (int i = 0; i < d; ++i) phase += double(f[i]) * sampling_.coord(j, i);
        acc += c[k] * unit_phase(phase);
      }
    }
    out[j] = acc;
  }
}

void MeasurementOperator::adjoint_direct(const Eigen::VectorXcd& r,
                                         Eigen::VectorXcd& out) const {
  const Index n = rows(), dd = cols();
  const int d = frequencies_->dim();
  out.setZero(dd);

  if (grid_ > 0) {
    for (Index j = 0; j < n; ++j) {
      const Complex rj = r[j];
      if (contiguous_1d_) {
        const long step = sample_coords_(j, 0);
        long t = (freq_residues_(0, 0) * step) % grid_;
        for (Index k = 0; k < dd; ++k) {
          out[k] += rj * std::conj(roots_[static_cast<std::size_t>(t)]);
          t += step;
          if (t >= grid_) t -= grid_;
        }
      } else {
        for (Index k = 0; k < dd; ++k) {
          long t = 0;
          for (int i = 0; i < d; ++i) t += freq_residues_(k, i) * sample_coords_(j, i);
          out[k] += rj * std::conj(roots_[static_cast<std::size_t>(t % grid_)]);
        }
      }
    }
    return;
  }

  for (Index j = 0; j < n; ++j) {
    const Complex rj = r[j];
    if (contiguous_1d_) {
      const double x = sampling_.coord(j, 0);
      const double k0 = double(frequencies_->freq(0)[0]);
      const Complex wbar = unit_phase(-x);
      Complex p = unit_phase(-k0 * x);
      for (Index k = 0; k < dd; ++k) {
        if (k > 0 && k % kRecurrenceRefresh == 0) p = unit_phase(-(k0 + double(k)) * x);
        out[k] += rj * p;
        p *= wbar;
      }
    } else {
      for (Index k = 0; k < dd; ++k) {
        const auto f = frequencies_->freq(k);
        double phase = 0.0;
        for (int i = 0; i < d; ++i) phase += double(f[i]) * sampling_.coord(j, i);
        out[k] += rj * unit_phase(-phase);
      }
    }
  }
}

Eigen::VectorXcd MeasurementOperator::column(Index k) const {
  if (k < 0 || k >= cols())
    throw std::invalid_argument("MeasurementOperator::column: index out of range");
  const Index n = rows();
  const int d = frequencies_->dim();
  Eigen::VectorXcd col(n);
  if (grid_ > 0) {
    for (Index j = 0; j < n; ++j) {
      long t = 0;
      for (int i = 0; i < d; ++i) t += freq_residues_(k, i) * sample_coords_(j, i);
      col[j] = roots_[static_cast<std::size_t>(t % grid_)];
    }
  } else {
    const auto f = frequencies_->freq(k);
    for (Index j = 0; j < n; ++j) {
      double phase = 0.0;
      for (int i = 0; i < d; ++i) phase += double(f[i]) * sampling_.coord(j, i);
      col[j] = unit_phase(phase);
    }
  }
  return col;
}

DenseOperator::DenseOperator(Eigen::MatrixXcd matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() < 1 || matrix_.cols() < 1)
    throw std::invalid_argument("DenseOperator: empty matrix");
  col_sq_ = matrix_.colwise().squaredNorm().real();
}

DenseOperator::DenseOperator(const Eigen::MatrixXd& real_matrix)
    : DenseOperator(Eigen::MatrixXcd(real_matrix.cast<Complex>())) {}

void DenseOperator::apply_into(const Eigen::VectorXcd& c, Eigen::VectorXcd& out) const {
  if (c.size() != cols())
    throw std::invalid_argument("DenseOperator::apply: coefficient length mismatch");
  out = matrix_ * c;
}

void DenseOperator::adjoint_into(const Eigen::VectorXcd& r, Eigen::VectorXcd& out) const {
  if (r.size() != rows())
    throw std::invalid_argument("DenseOperator::adjoint: sample length mismatch");
  out = matrix_.adjoint() * r;
}

SupportOperator::SupportOperator(const LinearOperator& parent,
                                 std::vector<Index> support)
    : parent_(&parent), support_(std::move(support)) {
  if (support_.empty())
    throw std::invalid_argument("SupportOperator: empty support");
  if (!std::is_sorted(support_.begin(), support_.end()) ||
      std::adjacent_find(support_.begin(), support_.end()) != support_.end())
    throw std::invalid_argument("SupportOperator: support must be sorted and unique");
  if (support_.front() < 0 || support_.back() >= parent.cols())
    throw std::invalid_argument("SupportOperator: support index out of range");
  matrix_.resize(parent.rows(), static_cast<Index>(support_.size()));
  for (std::size_t i = 0; i < support_.size(); ++i)
    matrix_.col(static_cast<Index>(i)) = parent.column(support_[i]);
}

Eigen::MatrixXcd gram_submatrix(const SupportOperator& sub) {
  const Index m = sub.size();
  if (m > kMaxExplicitGram)
    throw std::invalid_argument("gram_submatrix: support too large for an explicit Gram");
  Eigen::MatrixXcd g = sub.matrix().adjoint() * sub.matrix();
  g = ((g + g.adjoint()) / 2.0).eval();  // enforce exact Hermitian symmetry
  for (Index i = 0; i < m; ++i)
    g(i, i) = Complex(sub.parent().column_squared_norm(sub.support()[i]), 0.0);
  return g;
}

}  // namespace strig
