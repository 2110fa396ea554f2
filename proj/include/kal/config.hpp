#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "kal/fields.hpp"

namespace kal {

struct PsiSpec {
  PsiKind kind = PsiKind::bump;
  double radius = 1.0;
};

struct FieldSpec {
  FieldMode mode = FieldMode::identity;
  Curve curve = Curve::identity;
  double alpha = 1.0;
  double A = 1.0;
};

struct DataSpec {
  std::string generator = "gaussian_bump";  // gaussian_bump | two_point | time_box_source | div_source
  Profile profile;
  double t_box = 1.0;
  std::size_t node_a = 0;
  std::size_t node_b = 1;
};

struct SweepSpec {
  std::string parameter;  // empty: no sweep
  std::vector<double> values;
};

struct EstimatorSpec {
  std::string kind = "oracle";  // oracle | mc
  std::size_t n_paths = 20000;
  std::size_t n_batches = 20;
  std::uint64_t seed = 20240917;
};

struct ExperimentConfig {
  GridSpec grid;
  PsiSpec psi;
  FieldSpec field;
  DataSpec data;
  std::string case_tag = "g0_stoch";
  SweepSpec sweep;
  EstimatorSpec estimator;
  double lambda = 1.0;
  double beta = 0.25;
  std::string output;
};

const std::vector<std::string>& case_tags();

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);
/// Reads and validates a JSON config file; throws std::runtime_error with a diagnostic.
ExperimentConfig load_config(const std::string& path);

/// d = 1, |k| = 1..16, 17 nodes on [-1, 1], bump psi, geometric time grid to the lambda = 1 horizon.
ExperimentConfig canonical_config();

SpectralGrid make_grid(const ExperimentConfig& c);
TestFunction make_psi(const ExperimentConfig& c);
VelocityField make_field(const ExperimentConfig& c);
KineticData make_data(const ExperimentConfig& c, const SpectralGrid& grid);

std::string to_string(PsiKind k);
std::string to_string(Curve c);
std::string to_string(FieldMode m);

}  // namespace kal
