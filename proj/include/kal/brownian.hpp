#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "kal/fields.hpp"

namespace kal {

enum class PathMode { brownian, linear, frozen };

struct DrivingPath {
  std::vector<double> times;
  std::vector<double> values;
  PathMode mode = PathMode::brownian;
  std::uint64_t seed = 0;
  std::uint64_t path_id = 0;
};

/// SplitMix64 finalizer; used to derive independent per-path seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of path `index` under `master`. Depends only on the pair, never on scheduling.
std::uint64_t path_seed(std::uint64_t master, std::uint64_t index);

/// Standard normal stream: std::mt19937_64 feeding the Box-Muller transform.
/// Uniforms use the top 53 bits; both outputs of each pair are used.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed);
  double next();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Brownian path on the grid times with exact Gaussian increments.
DrivingPath sample_path(const SpectralGrid& grid, std::uint64_t seed);
DrivingPath sample_path(const std::vector<double>& times, std::uint64_t seed);

/// B(t) = t.
DrivingPath linear_path(const SpectralGrid& grid);
/// B(t) = 0.
DrivingPath frozen_path(const SpectralGrid& grid);

}  // namespace kal
