#pragma once

#include <map>
#include <string>

namespace kal {

/// Frozen empirical constants (observed sup ratio times headroom), keyed by name.
class GoldenConstants {
 public:
  static GoldenConstants load(const std::string& path);
  void save(const std::string& path) const;

  bool has(const std::string& name) const { return values_.count(name) != 0; }
  double get(const std::string& name) const;
  void set(const std::string& name, double v) { values_[name] = v; }
  const std::map<std::string, double>& all() const { return values_; }

 private:
  std::map<std::string, double> values_;
};

inline constexpr double kGoldenHeadroom = 1.2;

}  // namespace kal
