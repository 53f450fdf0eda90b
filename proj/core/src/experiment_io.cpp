#include <cctype>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "strig/csv.hpp"
#include "strig/experiments.hpp"
#include "strig/rng.hpp"

namespace strig {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) out.push_back(field);
  return out;
}

double parse_double(const std::string& s, Index line_no) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    while (used < s.size() && std::isspace(static_cast<unsigned char>(s[used]))) ++used;
    if (used != s.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument("samples csv: bad number '" + s + "' on line " +
                                std::to_string(line_no));
  }
}

template <typename Row>
void emit(std::ostream& os, const std::vector<std::string>& header,
          const std::vector<Row>& rows,
          const std::function<std::vector<std::string>(const Row&)>& fields,
          const std::string& hash, char sep, bool comment_header) {
  if (comment_header) os << "# ";
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) os << sep;
    os << header[i];
  }
  os << '\n';
  for (const Row& row : rows) {
    const std::vector<std::string> f = fields(row);
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (i) os << sep;
      os << f[i];
    }
    os << sep << hash << sep << kSeedRuleVersion << '\n';
  }
}

const std::vector<std::string> kSweepHeader = {
    "algorithm", "D", "N", "M", "trials", "successes",
    "mean_time_seconds", "skipped", "config_hash", "seed_rule"};
std::vector<std::string> sweep_fields(const SweepRow& r) {
  return {algorithm_name(r.alg), std::to_string(r.d), std::to_string(r.n),
          std::to_string(r.m), std::to_string(r.trials), std::to_string(r.successes),
          fmt_double(r.mean_time_seconds), r.skipped ? "1" : "0"};
}

const std::vector<std::string> kOversampleHeader = {
    "algorithm", "D", "M", "target_rate", "trials", "n_star",
    "theta", "saturated", "config_hash", "seed_rule"};
std::vector<std::string> oversample_fields(const OversampleRow& r) {
  return {algorithm_name(r.alg), std::to_string(r.d), std::to_string(r.m),
          fmt_double(r.target_rate), std::to_string(r.trials), std::to_string(r.n_star),
          fmt_double(r.theta), r.saturated ? "1" : "0"};
}

const std::vector<std::string> kTimingHeader = {
    "variant", "D", "M", "N", "runs", "median_seconds", "config_hash", "seed_rule"};
std::vector<std::string> timing_fields(const TimingRow& r) {
  return {r.variant, std::to_string(r.d), std::to_string(r.m), std::to_string(r.n),
          std::to_string(r.runs), fmt_double(r.median_seconds)};
}

const std::vector<std::string> kNoiseHeader = {
    "M", "sigma2", "trial", "support_recovered", "max_coeff_error",
    "psnr_db", "config_hash", "seed_rule"};
std::vector<std::string> noise_fields(const NoiseRow& r) {
  return {std::to_string(r.m), fmt_double(r.sigma2), std::to_string(r.trial),
          r.support_recovered ? "1" : "0", fmt_double(r.max_coeff_error),
          fmt_double(r.psnr_db)};
}

const std::vector<std::string> kAuditHeader = {
    "check", "model", "D", "M", "N", "trials", "violations",
    "eps", "fraction", "config_hash", "seed_rule"};
std::vector<std::string> audit_fields(const AuditRow& r) {
  return {r.check, model_name(r.model), std::to_string(r.d), std::to_string(r.m),
          std::to_string(r.n), std::to_string(r.trials), std::to_string(r.violations),
          fmt_double(r.eps), fmt_double(r.fraction)};
}

}  // namespace

void write_csv(std::ostream& os, const SweepResult& r) {
  emit<SweepRow>(os, kSweepHeader, r.rows, sweep_fields, r.config_hash, ',', false);
}
void write_csv(std::ostream& os, const OversampleResult& r) {
  emit<OversampleRow>(os, kOversampleHeader, r.rows, oversample_fields, r.config_hash, ',', false);
}
void write_csv(std::ostream& os, const TimingResult& r) {
  emit<TimingRow>(os, kTimingHeader, r.rows, timing_fields, r.config_hash, ',', false);
}
void write_csv(std::ostream& os, const NoiseResult& r) {
  emit<NoiseRow>(os, kNoiseHeader, r.rows, noise_fields, r.config_hash, ',', false);
}
void write_csv(std::ostream& os, const AuditResult& r) {
  emit<AuditRow>(os, kAuditHeader, r.rows, audit_fields, r.config_hash, ',', false);
}

void write_dat(std::ostream& os, const SweepResult& r) {
  emit<SweepRow>(os, kSweepHeader, r.rows, sweep_fields, r.config_hash, ' ', true);
}
void write_dat(std::ostream& os, const OversampleResult& r) {
  emit<OversampleRow>(os, kOversampleHeader, r.rows, oversample_fields, r.config_hash, ' ', true);
}
void write_dat(std::ostream& os, const TimingResult& r) {
  emit<TimingRow>(os, kTimingHeader, r.rows, timing_fields, r.config_hash, ' ', true);
}
void write_dat(std::ostream& os, const NoiseResult& r) {
  emit<NoiseRow>(os, kNoiseHeader, r.rows, noise_fields, r.config_hash, ' ', true);
}
void write_dat(std::ostream& os, const AuditResult& r) {
  emit<AuditRow>(os, kAuditHeader, r.rows, audit_fields, r.config_hash, ' ', true);
}

SampleTable read_samples_csv(std::istream& is, int dim) {
  if (dim < 1) throw std::invalid_argument("read_samples_csv: need dim >= 1");
  std::vector<std::vector<double>> rows;
  std::string line;
  Index line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto fields = split_line(line);
    if (line_no == 1 && !fields.empty() && fields[0] == "x1") continue;  // header
    if (static_cast<int>(fields.size()) != dim + 2)
      throw std::invalid_argument("samples csv: expected " + std::to_string(dim + 2) +
                                  " fields on line " + std::to_string(line_no));
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_double(f, line_no));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("samples csv: no data rows");

  SampleTable table;
  table.points.resize(static_cast<Index>(rows.size()), dim);
  table.values.resize(static_cast<Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j) {
    for (int i = 0; i < dim; ++i) table.points(static_cast<Index>(j), i) = rows[j][static_cast<std::size_t>(i)];
    table.values[static_cast<Index>(j)] =
        Complex(rows[j][static_cast<std::size_t>(dim)], rows[j][static_cast<std::size_t>(dim) + 1]);
  }
  return table;
}

void write_samples_csv(std::ostream& os, const SampleTable& t) {
  for (int i = 0; i < t.points.cols(); ++i) os << 'x' << (i + 1) << ',';
  os << "re,im\n";
  for (Index j = 0; j < t.points.rows(); ++j) {
    for (int i = 0; i < t.points.cols(); ++i) os << fmt_double(t.points(j, i)) << ',';
    os << fmt_double(t.values[j].real()) << ',' << fmt_double(t.values[j].imag()) << '\n';
  }
}

void write_coefficients_csv(std::ostream& os, const FrequencySet& gamma,
                            const Eigen::VectorXcd& coefficients) {
  if (coefficients.size() != gamma.size())
    throw std::invalid_argument("write_coefficients_csv: length mismatch");
  for (int i = 0; i < gamma.dim(); ++i) os << 'k' << (i + 1) << ',';
  os << "re,im\n";
  for (Index k = 0; k < coefficients.size(); ++k) {
    if (coefficients[k] == Complex(0.0, 0.0)) continue;
    const auto f = gamma.freq(k);
    for (int i = 0; i < gamma.dim(); ++i) os << f[i] << ',';
    os << fmt_double(coefficients[k].real()) << ',' << fmt_double(coefficients[k].imag())
       << '\n';
  }
}

}  // namespace strig
