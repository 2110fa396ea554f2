#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kal/csv.hpp"
#include "kal/golden.hpp"

namespace kal {

struct BatteryOptions {
  unsigned threads = 1;
  std::uint64_t seed = 20240917;
};

/// Result of one acceptance experiment: the CSV rows it produced and every sub-check that failed.
struct CheckOutcome {
  int criterion = 0;
  std::string title;
  bool pass = true;
  std::vector<std::string> failures;
  std::vector<std::string> notes;  // headline measurements, one line each
  std::vector<ResultRow> rows;
  std::vector<FitRow> fits;

  void require(bool ok, const std::string& what);
  void note(const std::string& line) { notes.push_back(line); }
};

/// The canonical experiment battery. Criteria 1..10 run in-process; 11 is the randomized
/// pathwise check. Frozen constants come from the golden file; `calibrate` recomputes them.
class Battery {
 public:
  Battery(GoldenConstants golden, BatteryOptions opt);

  static constexpr int kCriteria = 11;
  CheckOutcome run(int criterion);
  std::vector<CheckOutcome> run_all();

  /// Kernel identity and bound sweep (the `kernels verify` subcommand).
  CheckOutcome kernels_verify();
  /// Randomized L1 / Linf pathwise inequalities on `instances` nonnegative data.
  CheckOutcome pathwise(std::size_t instances);

  /// Observed sup of value / shape on each calibration sweep, times kGoldenHeadroom.
  GoldenConstants calibrate();

 private:
  CheckOutcome gaussian_identities();
  CheckOutcome kernel_closed_forms();
  CheckOutcome oracle_vs_mc();
  CheckOutcome lambda_exponent();
  CheckOutcome inequality_suite();
  CheckOutcome deterministic_contrast();
  CheckOutcome general_field();
  CheckOutcome time_regularity();
  CheckOutcome deterministic_time_regularity();
  CheckOutcome div_case();

  // value <= C * shape, one row each; only rows with calib = true enter the calibration sup.
  struct Ratio {
    ResultRow row;
    double value = 0.0;
    double shape = 1.0;
    bool calib = true;
  };
  double judge(const std::string& key, std::vector<Ratio> ratios, CheckOutcome& out);
  double constant(const std::string& key, CheckOutcome& out) const;
  void technic_sweep(CheckOutcome& out);
  void bracket_sweep(CheckOutcome& out);

  GoldenConstants golden_;
  BatteryOptions opt_;
  bool calibrating_ = false;
  GoldenConstants observed_;
};

}  // namespace kal
