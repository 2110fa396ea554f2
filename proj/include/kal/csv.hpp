#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace kal {

/// One row of the frozen result schema. Unset optionals print as empty fields.
struct ResultRow {
  std::string experiment_id;
  std::string case_tag;
  std::optional<long> k_index;
  std::optional<double> k_mag;
  std::optional<double> lambda;
  std::optional<double> alpha;
  std::optional<double> beta;
  std::string estimator;
  std::optional<double> value;
  std::optional<double> stderr_;
  std::optional<double> bound;
  std::optional<bool> pass;
  std::optional<long> n_paths;
  std::optional<unsigned long long> seed;
};

struct FitRow {
  std::string sweep_id;
  double exponent = 0.0;
  double half_width = 0.0;
  double r2 = 0.0;
  double expected_exponent = 0.0;
  bool pass = false;
};

extern const char* const kResultHeader;
extern const char* const kFitHeader;

/// "# generated <UTC timestamp>" line; the only non-deterministic output line.
std::string timestamp_comment();

/// Shortest round-trip decimal representation.
std::string format_double(double v);

void write_results(std::ostream& os, const std::vector<ResultRow>& rows, bool with_header = true);
void write_fits(std::ostream& os, const std::vector<FitRow>& rows, bool with_header = true);

/// Minimal reader for the two schemas (header-keyed, '#' lines skipped).
std::vector<std::vector<std::string>> read_csv(std::istream& is, std::vector<std::string>* header);

}  // namespace kal
