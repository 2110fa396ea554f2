#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "kal/brownian.hpp"
#include "kal/fields.hpp"
#include "kal/norms.hpp"
#include "kal/solver.hpp"

namespace kal {

struct NormEstimate {
  double value = 0.0;
  double stderr_ = 0.0;  // std of batch means / sqrt(n_batches)
  std::size_t n_paths = 0;
  std::size_t n_batches = 0;
  std::uint64_t master_seed = 0;
  std::string tag;
};

struct McOptions {
  std::size_t n_paths = 20000;
  std::size_t n_batches = 20;
  std::uint64_t master_seed = 20240917;
  unsigned threads = 1;
};

/// Per-path observable: given the path index and its derived seed, return a fixed-length vector.
using PathObservable = std::function<std::vector<double>(std::uint64_t index, std::uint64_t seed)>;

/// Runs the observable for every path index (in parallel), then reduces in index order into
/// batch means. Output i is the estimate of component i. Results do not depend on `threads`.
std::vector<NormEstimate> estimate_observable(const PathObservable& obs, const McOptions& opt,
                                              const std::string& tag = "custom");

enum class FunctionalKind { damped_energy, weighted_energy, gagliardo };

struct FunctionalSpec {
  FunctionalKind kind = FunctionalKind::damped_energy;
  double lambda = 1.0;
  double beta = 0.25;
  SobolevWeight weight;        // weighted_energy only
  PathMode path_mode = PathMode::brownian;
  bool zero_tail = true;       // gagliardo: account for t > T where the damped trace is ~0
  double damping_in_gagliardo = -1.0;  // gagliardo: damping of u = e^{-l t} rho; < 0 means use lambda
};

std::string functional_name(FunctionalKind k);

/// Per-k (or, for weighted_energy, a single total) Monte-Carlo estimate of the functional
/// applied to solve_trace output.
std::vector<NormEstimate> estimate(const FunctionalSpec& spec, const SpectralGrid& grid, const KineticData& data,
                                   const VelocityField& field, const TestFunction& psi, const McOptions& opt);

/// The functional on a single trace (what one Monte-Carlo sample contributes).
std::vector<double> evaluate_functional(const FunctionalSpec& spec, const SpectralGrid& grid,
                                        const AverageTrace& trace);

}  // namespace kal
