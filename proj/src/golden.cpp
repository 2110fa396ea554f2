#include "kal/golden.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace kal {

GoldenConstants GoldenConstants::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open golden file '" + path + "'");
  nlohmann::json j = nlohmann::json::parse(in);
  GoldenConstants g;
  for (auto it = j.at("constants").begin(); it != j.at("constants").end(); ++it)
    g.values_[it.key()] = it.value().get<double>();
  return g;
}

void GoldenConstants::save(const std::string& path) const {
  nlohmann::json j;
  j["headroom"] = kGoldenHeadroom;
  j["constants"] = values_;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write golden file '" + path + "'");
  out << j.dump(2) << '\n';
}

double GoldenConstants::get(const std::string& name) const {
  auto it = values_.find(name);
  if (it == values_.end()) throw std::out_of_range("golden constant '" + name + "' missing");
  return it->second;
}

}  // namespace kal
