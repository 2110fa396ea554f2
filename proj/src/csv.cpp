#include "kal/csv.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <sstream>

namespace kal {

const char* const kResultHeader =
    "experiment_id,case,k_index,k_mag,lambda,alpha,beta,estimator,value,stderr,bound,pass,n_paths,seed";
const char* const kFitHeader = "sweep_id,exponent,half_width,r2,expected_exponent,pass";

std::string timestamp_comment() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[64];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return std::string("# generated ") + buf;
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

template <class T>
std::string opt(const std::optional<T>& v) {
  if (!v) return {};
  if constexpr (std::is_same_v<T, double>)
    return format_double(*v);
  else if constexpr (std::is_same_v<T, bool>)
    return *v ? "true" : "false";
  else
    return std::to_string(*v);
}

}  // namespace

void write_results(std::ostream& os, const std::vector<ResultRow>& rows, bool with_header) {
  if (with_header) os << timestamp_comment() << '\n' << kResultHeader << '\n';
  for (const auto& r : rows) {
    os << r.experiment_id << ',' << r.case_tag << ',' << opt(r.k_index) << ',' << opt(r.k_mag) << ','
       << opt(r.lambda) << ',' << opt(r.alpha) << ',' << opt(r.beta) << ',' << r.estimator << ',' << opt(r.value)
       << ',' << opt(r.stderr_) << ',' << opt(r.bound) << ',' << opt(r.pass) << ',' << opt(r.n_paths) << ','
       << opt(r.seed) << '\n';
  }
}

void write_fits(std::ostream& os, const std::vector<FitRow>& rows, bool with_header) {
  if (with_header) os << timestamp_comment() << '\n' << kFitHeader << '\n';
  for (const auto& r : rows)
    os << r.sweep_id << ',' << format_double(r.exponent) << ',' << format_double(r.half_width) << ','
       << format_double(r.r2) << ',' << format_double(r.expected_exponent) << ',' << (r.pass ? "true" : "false")
       << '\n';
}

std::vector<std::vector<std::string>> read_csv(std::istream& is, std::vector<std::string>* header) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  bool have_header = false;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    if (!have_header) {
      have_header = true;
      if (header) *header = fields;
      continue;
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace kal
