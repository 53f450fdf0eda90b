#include "strig/analysis.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "strig/csv.hpp"

namespace strig {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Distinct canonical (lexicographically positive) frequency differences with
// a representative ordered column pair each. Iterating a < b in canonical
// order makes the representative deterministic.
std::map<std::vector<int>, std::pair<Index, Index>> canonical_differences(
    const FrequencySet& gamma) {
  const int d = gamma.dim();
  std::map<std::vector<int>, std::pair<Index, Index>> diffs;
  std::vector<int> delta(static_cast<std::size_t>(d));
  for (Index a = 0; a < gamma.size(); ++a) {
    const auto fa = gamma.freq(a);
    for (Index b = a + 1; b < gamma.size(); ++b) {
      const auto fb = gamma.freq(b);
      for (int i = 0; i < d; ++i) delta[static_cast<std::size_t>(i)] = fb[i] - fa[i];
      diffs.emplace(delta, std::make_pair(a, b));
    }
  }
  return diffs;
}

// S(delta) = sum_j e^{i delta . x_j}; exact root-of-unity arithmetic under
// the discrete model.
Complex difference_sum(const MeasurementOperator& op, const std::vector<int>& delta) {
  const SamplingSet& x = op.sampling();
  const int d = x.dim();
  const Index n = x.size();
  Complex s(0, 0);
  if (x.model().kind == ModelKind::discrete) {
    const long m = x.model().grid;
    std::vector<long> res(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) {
      long v = delta[static_cast<std::size_t>(i)] % m;
      res[static_cast<std::size_t>(i)] = v < 0 ? v + m : v;
    }
    for (Index j = 0; j < n; ++j) {
      long t = 0;
      for (int i = 0; i < d; ++i) {
        const long g = std::lround(x.coord(j, i) * double(m) / kTwoPi) % m;
        t += res[static_cast<std::size_t>(i)] * (g < 0 ? g + m : g);
      }
      const double phase = kTwoPi * double(t % m) / double(m);
      s += Complex(std::cos(phase), std::sin(phase));
    }
  } else {
    for (Index j = 0; j < n; ++j) {
      double phase = 0.0;
      for (int i = 0; i < d; ++i) phase += double(delta[static_cast<std::size_t>(i)]) * x.coord(j, i);
      s += Complex(std::cos(phase), std::sin(phase));
    }
  }
  return s;
}

}  // namespace

CoherenceReport coherence(const MeasurementOperator& op) {
  if (op.cols() < 2)
    throw std::invalid_argument("coherence: need at least two columns");
  const auto diffs = canonical_differences(op.frequencies());
  const double n = double(op.rows());

  CoherenceReport report;
  for (const auto& [delta, pair] : diffs) {
    const double value = std::abs(difference_sum(op, delta)) / n;
    if (value > report.mu) {
      report.mu = value;
      report.argmax_pair = pair;
    }
  }
  Index m = 0;
  while (m < op.cols() && double(2 * (m + 1) - 1) * report.mu < 1.0) ++m;
  report.recovery_bound_sparsity = m;
  return report;
}

bool check_omp_uniform(const CoherenceReport& coh, Index m) {
  return double(2 * m - 1) * coh.mu < 1.0;
}

bool check_thresh_uniform(const CoherenceReport& coh, Index m, double r) {
  if (r < 1.0)
    throw std::invalid_argument("check_thresh_uniform: dynamic range must be >= 1");
  return double(2 * m - 1) * coh.mu < 1.0 / r;
}

namespace detail {

std::pair<double, double> extreme_eigs_dense(const Eigen::MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev.minCoeff(), ev.maxCoeff()};
}

namespace {

double power_iteration(const Eigen::MatrixXcd& h, double tol) {
  const Index n = h.rows();
  Eigen::VectorXcd v(n);
  for (Index i = 0; i < n; ++i) v[i] = Complex(1.0 + double(i) / double(2 * n), 0.0);
  v /= v.norm();
  double lambda = 0.0;
  for (int it = 0; it < 100000; ++it) {
    const Eigen::VectorXcd w = h * v;
    const double wn = w.norm();
    if (wn < 1e-300) return 0.0;
    const double next = v.dot(w).real();
    v = w / wn;
    if (it > 0 && std::abs(next - lambda) <= tol * std::max(1.0, std::abs(next))) {
      return next;
    }
    lambda = next;
  }
  return lambda;
}

}  // namespace

std::pair<double, double> extreme_eigs_power(const Eigen::MatrixXcd& h, double tol) {
  const double hi = power_iteration(h, tol);
  const Eigen::MatrixXcd shifted =
      Eigen::MatrixXcd(hi * Eigen::MatrixXcd::Identity(h.rows(), h.cols()) - h);
  const double spread = power_iteration(shifted, tol);
  return {hi - spread, hi};
}

}  // namespace detail

EigBoundReport gram_eigs(const SupportOperator& sub) {
  const double n = double(sub.parent().rows());
  const Eigen::MatrixXcd scaled = gram_submatrix(sub) / n;
  const auto [lo, hi] = sub.size() <= 512
                            ? detail::extreme_eigs_dense(scaled)
                            : detail::extreme_eigs_power(scaled, 1e-10);
  EigBoundReport report;
  report.lambda_min = lo;
  report.lambda_max = hi;
  report.delta = std::max(1.0 - lo, hi - 1.0);
  return report;
}

RICReport ric_bruteforce(const MeasurementOperator& op, Index m_max) {
  const Index d = op.cols();
  if (m_max < 1 || m_max > d)
    throw std::invalid_argument("ric_bruteforce: need 1 <= Mmax <= D");
  double budget = 0.0, binom = 1.0;
  for (Index m = 1; m <= m_max; ++m) {
    binom = binom * double(d - m + 1) / double(m);
    budget += binom;
    if (budget > 1e6)
      throw std::invalid_argument("ric_bruteforce: combinatorial budget exceeded");
  }

  const double n = double(op.rows());
  RICReport report;
  report.deltas.resize(static_cast<std::size_t>(m_max), 0.0);
  double running = 0.0;
  for (Index m = 1; m <= m_max; ++m) {
    std::vector<Index> subset(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) subset[static_cast<std::size_t>(i)] = i;
    for (;;) {
      SupportOperator sub(op, subset);
      const Eigen::MatrixXcd scaled = gram_submatrix(sub) / n;
      const auto [lo, hi] = detail::extreme_eigs_dense(scaled);
      running = std::max(running, std::max(1.0 - lo, hi - 1.0));

      // next combination
      Index i = m - 1;
      while (i >= 0 && subset[static_cast<std::size_t>(i)] == d - m + i) --i;
      if (i < 0) break;
      ++subset[static_cast<std::size_t>(i)];
      for (Index j = i + 1; j < m; ++j)
        subset[static_cast<std::size_t>(j)] = subset[static_cast<std::size_t>(j - 1)] + 1;
    }
    report.deltas[static_cast<std::size_t>(m - 1)] = running;
  }

  const Index m_star = m_max / 3;
  if (m_star >= 1) {
    const auto delta_at = [&](Index m) { return report.deltas[static_cast<std::size_t>(m - 1)]; };
    report.condition_crt =
        delta_at(m_star) + delta_at(2 * m_star) + delta_at(3 * m_star) < 1.0;
  }
  return report;
}

Index d_prime_count(const FrequencySet& gamma, std::optional<long> periodic_grid) {
  const int d = gamma.dim();
  if (periodic_grid) {
    const long m = *periodic_grid;
    std::set<std::vector<long>> residues;
    std::vector<long> r(static_cast<std::size_t>(d));
    for (const auto& [delta, pair] : canonical_differences(gamma)) {
      (void)pair;
      for (int sign : {+1, -1}) {
        for (int i = 0; i < d; ++i) {
          long v = (sign * delta[static_cast<std::size_t>(i)]) % m;
          r[static_cast<std::size_t>(i)] = v < 0 ? v + m : v;
        }
        bool zero = true;
        for (long vi : r) zero = zero && vi == 0;
        if (!zero) residues.insert(r);
      }
    }
    return static_cast<Index>(residues.size());
  }
  // Every canonical difference pairs with its negation, and they never
  // coincide, so ordered-pair differences count twice the canonical ones.
  return 2 * static_cast<Index>(canonical_differences(gamma).size());
}

SampleBoundTable sample_bounds(const FrequencySet& gamma, Index m, double r,
                               double eps, ModelKind model,
                               std::optional<long> periodic_grid) {
  if (m < 1) throw std::invalid_argument("sample_bounds: need M >= 1");
  if (r < 1.0) throw std::invalid_argument("sample_bounds: need R >= 1");
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("sample_bounds: need eps in (0,1)");

  const double dd = double(gamma.size());
  // The periodic difference count applies when Gamma covers Z_m^d exactly
  // and the samples live on the same grid.
  std::optional<long> periodic;
  if (model == ModelKind::discrete && periodic_grid) {
    double full = 1.0;
    for (int i = 0; i < gamma.dim(); ++i) full *= double(*periodic_grid);
    if (gamma.subset_of_grid(*periodic_grid) && dd == full) periodic = periodic_grid;
  }

  SampleBoundTable table;
  table.d_prime = d_prime_count(gamma, periodic);
  table.n_thresh = static_cast<long>(std::ceil(17.89 * double(m) * r * r * std::log(4.0 * dd / eps)));
  table.n_omp = static_cast<long>(std::ceil(32.62 * double(m) * std::log(8.0 * dd / eps)));
  const double c_coh =
      model == ModelKind::continuous ? 4.0 / 3.0 : 4.0 + 4.0 / (3.0 * std::sqrt(2.0));
  const double two_m1 = double(2 * m - 1);
  table.n_coherence = static_cast<long>(
      std::ceil(c_coh * two_m1 * two_m1 * std::log(4.0 * double(table.d_prime) / eps)));
  table.n_bp = std::nullopt;
  return table;
}

long eig_bound_samples(Index m, double delta, double eps) {
  if (m < 1) throw std::invalid_argument("eig_bound_samples: need M >= 1");
  if (!(delta > 0.0 && delta < 1.0) || !(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("eig_bound_samples: need delta, eps in (0,1)");
  return static_cast<long>(
      std::ceil(10.0 / (delta * delta) * double(m) * std::log(double(m) / eps)));
}

double bernstein_offsupport_tail(double x, const Eigen::VectorXcd& support_values,
                                 Index n) {
  const double l2sq = support_values.squaredNorm();
  const double l1 = support_values.cwiseAbs().sum();
  const double denom = 4.0 * l2sq + 4.0 / (3.0 * std::sqrt(2.0)) * l1 * x;
  return 4.0 * std::exp(-double(n) * x * x / denom);
}

void write_csv(std::ostream& os, const CoherenceReport& r) {
  os << "mu,argmax_j,argmax_k,recovery_bound_sparsity\n"
     << fmt_double(r.mu) << ',' << r.argmax_pair.first << ',' << r.argmax_pair.second
     << ',' << r.recovery_bound_sparsity << '\n';
}

void write_csv(std::ostream& os, const EigBoundReport& r) {
  os << "lambda_min,lambda_max,delta\n"
     << fmt_double(r.lambda_min) << ',' << fmt_double(r.lambda_max) << ','
     << fmt_double(r.delta) << '\n';
}

void write_csv(std::ostream& os, const RICReport& r) {
  os << "m,delta_m\n";
  for (std::size_t i = 0; i < r.deltas.size(); ++i)
    os << (i + 1) << ',' << fmt_double(r.deltas[i]) << '\n';
}

void write_csv(std::ostream& os, const SampleBoundTable& r) {
  os << "bound,n\n"
     << "thresholding," << r.n_thresh << '\n'
     << "omp," << r.n_omp << '\n'
     << "coherence," << r.n_coherence << '\n'
     << "bp," << (r.n_bp ? std::to_string(*r.n_bp) : "unknown") << '\n';
}

std::string describe(const CoherenceReport& r) {
  std::ostringstream os;
  os << "coherence mu = " << fmt_double(r.mu) << " attained by columns ("
     << r.argmax_pair.first << ", " << r.argmax_pair.second
     << "); uniform recovery guaranteed up to sparsity " << r.recovery_bound_sparsity;
  return os.str();
}

std::string describe(const EigBoundReport& r) {
  std::ostringstream os;
  os << "eigenvalues of N^-1 F_TX^* F_TX in [" << fmt_double(r.lambda_min) << ", "
     << fmt_double(r.lambda_max) << "], delta = " << fmt_double(r.delta);
  return os.str();
}

std::string describe(const RICReport& r) {
  std::ostringstream os;
  os << "restricted isometry constants:";
  for (std::size_t i = 0; i < r.deltas.size(); ++i)
    os << " delta_" << (i + 1) << " = " << fmt_double(r.deltas[i]);
  if (r.condition_crt)
    os << "; delta_M + delta_2M + delta_3M < 1: " << (*r.condition_crt ? "yes" : "no");
  return os.str();
}

std::string describe(const SampleBoundTable& r) {
  std::ostringstream os;
  os << "sample bounds: thresholding " << r.n_thresh << ", omp " << r.n_omp
     << ", coherence " << r.n_coherence << " (D' = " << r.d_prime
     << "), bp constant unknown";
  return os.str();
}

}  // namespace strig
