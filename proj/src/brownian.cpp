#include "kal/brownian.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kal {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t path_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

GaussianStream::GaussianStream(std::uint64_t seed) : engine_(seed) {}

double GaussianStream::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] so the log is finite.
  const double u1 = 1.0 - static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(phi);
  has_spare_ = true;
  return r * std::cos(phi);
}

DrivingPath sample_path(const std::vector<double>& times, std::uint64_t seed) {
  if (times.empty() || times[0] != 0.0) throw std::invalid_argument("time grid must start at 0");
  DrivingPath p;
  p.times = times;
  p.values.assign(times.size(), 0.0);
  p.mode = PathMode::brownian;
  p.seed = seed;
  GaussianStream g(seed);
  for (std::size_t j = 1; j < times.size(); ++j) {
    const double dt = times[j] - times[j - 1];
    if (!(dt > 0.0)) throw std::invalid_argument("time grid must be strictly increasing");
    p.values[j] = p.values[j - 1] + std::sqrt(dt) * g.next();
  }
  return p;
}

DrivingPath sample_path(const SpectralGrid& grid, std::uint64_t seed) { return sample_path(grid.times, seed); }

DrivingPath linear_path(const SpectralGrid& grid) {
  DrivingPath p;
  p.times = grid.times;
  p.values = grid.times;
  p.mode = PathMode::linear;
  return p;
}

DrivingPath frozen_path(const SpectralGrid& grid) {
  DrivingPath p;
  p.times = grid.times;
  p.values.assign(grid.times.size(), 0.0);
  p.mode = PathMode::frozen;
  return p;
}

}  // namespace kal
