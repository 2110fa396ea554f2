#include "kal/mc.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace kal {

std::vector<NormEstimate> estimate_observable(const PathObservable& obs, const McOptions& opt,
                                              const std::string& tag) {
  if (opt.n_batches < 2) throw std::invalid_argument("need at least 2 batches");
  if (opt.n_paths < opt.n_batches) throw std::invalid_argument("N must be >= number of batches");
  const std::size_t N = opt.n_paths;
  std::vector<std::vector<double>> out(N);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= N) return;
      try {
        out[i] = obs(i, path_seed(opt.master_seed, i));
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(N);
        return;
      }
    }
  };
  const unsigned T = std::max(1u, opt.threads);
  if (T == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < T; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  const std::size_t dim = out[0].size();
  for (const auto& v : out)
    if (v.size() != dim) throw std::runtime_error("observable returned vectors of varying length");

  const std::size_t B = opt.n_batches;
  std::vector<NormEstimate> est(dim);
  for (std::size_t c = 0; c < dim; ++c) {
    std::vector<double> means(B, 0.0);
    for (std::size_t b = 0; b < B; ++b) {
      const std::size_t lo = b * N / B, hi = (b + 1) * N / B;
      double s = 0.0;
      for (std::size_t i = lo; i < hi; ++i) s += out[i][c];
      means[b] = s / static_cast<double>(hi - lo);
    }
    double mean = 0.0;
    for (double m : means) mean += m;
    mean /= static_cast<double>(B);
    double var = 0.0;
    for (double m : means) var += (m - mean) * (m - mean);
    var /= static_cast<double>(B - 1);
    est[c].value = mean;
    est[c].stderr_ = std::sqrt(var / static_cast<double>(B));
    est[c].n_paths = N;
    est[c].n_batches = B;
    est[c].master_seed = opt.master_seed;
    est[c].tag = tag;
  }
  return est;
}

std::string functional_name(FunctionalKind k) {
  switch (k) {
    case FunctionalKind::damped_energy: return "damped_time_energy";
    case FunctionalKind::weighted_energy: return "weighted_space_energy";
    case FunctionalKind::gagliardo: return "gagliardo_seminorm";
  }
  return "unknown";
}

std::vector<double> evaluate_functional(const FunctionalSpec& spec, const SpectralGrid& grid,
                                        const AverageTrace& trace) {
  switch (spec.kind) {
    case FunctionalKind::damped_energy:
      return damped_time_energy(trace, grid.times, spec.lambda).per_k;
    case FunctionalKind::weighted_energy: {
      const auto e = damped_time_energy(trace, grid.times, spec.lambda).per_k;
      std::vector<double> kmag(grid.n_k());
      for (std::size_t k = 0; k < grid.n_k(); ++k) kmag[k] = norm(grid.wavenumbers[k]);
      return {weighted_space_energy(e, kmag, spec.weight)};
    }
    case FunctionalKind::gagliardo: {
      const double l = spec.damping_in_gagliardo >= 0.0 ? spec.damping_in_gagliardo : spec.lambda;
      std::vector<double> out(trace.n_k);
      std::vector<Complex> u(trace.n_t);
      for (std::size_t k = 0; k < trace.n_k; ++k) {
        for (std::size_t j = 0; j < trace.n_t; ++j) u[j] = std::exp(-l * grid.times[j]) * trace(k, j);
        out[k] = gagliardo_seminorm(u, grid.times, spec.beta);
        if (spec.zero_tail) out[k] += gagliardo_zero_tail(u, grid.times, spec.beta);
      }
      return out;
    }
  }
  return {};
}

std::vector<NormEstimate> estimate(const FunctionalSpec& spec, const SpectralGrid& grid, const KineticData& data,
                                   const VelocityField& field, const TestFunction& psi, const McOptions& opt) {
  data.validate(grid);
  auto obs = [&](std::uint64_t index, std::uint64_t seed) {
    DrivingPath path = spec.path_mode == PathMode::brownian ? sample_path(grid, seed)
                       : spec.path_mode == PathMode::linear ? linear_path(grid)
                                                            : frozen_path(grid);
    path.path_id = index;
    const auto trace = solve_trace(grid, data, field, path, psi);
    return evaluate_functional(spec, grid, trace);
  };
  return estimate_observable(obs, opt, functional_name(spec.kind));
}

}  // namespace kal
