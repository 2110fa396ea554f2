#include "kal/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "kal/solver.hpp"

namespace kal {

using nlohmann::json;

const std::vector<std::string>& case_tags() {
  static const std::vector<std::string> tags = {"g0_stoch", "g0_det",   "f0zero",  "div",
                                                "time_reg", "kernels", "pathwise"};
  return tags;
}

std::string to_string(PsiKind k) {
  switch (k) {
    case PsiKind::bump: return "bump";
    case PsiKind::hat: return "hat";
    case PsiKind::indicator: return "indicator";
  }
  return "bump";
}

std::string to_string(Curve c) {
  switch (c) {
    case Curve::identity: return "identity";
    case Curve::cubic: return "cubic";
    case Curve::quadratic: return "quadratic";
  }
  return "identity";
}

std::string to_string(FieldMode m) { return m == FieldMode::identity ? "identity" : "general"; }

namespace {

PsiKind psi_kind(const std::string& s) {
  if (s == "bump") return PsiKind::bump;
  if (s == "hat") return PsiKind::hat;
  if (s == "indicator") return PsiKind::indicator;
  throw std::runtime_error("unknown psi kind '" + s + "'");
}

Curve curve_kind(const std::string& s) {
  if (s == "identity") return Curve::identity;
  if (s == "cubic") return Curve::cubic;
  if (s == "quadratic") return Curve::quadratic;
  throw std::runtime_error("unknown curve '" + s + "'");
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
  if (!j.is_object()) throw std::runtime_error("config must be a JSON object");
  ExperimentConfig c;
  auto& g = c.grid;
  g.dimension = j.value("dimension", 1);
  if (!j.contains("wavenumbers")) throw std::runtime_error("config is missing 'wavenumbers'");
  g.wavenumbers.clear();
  for (const auto& k : j.at("wavenumbers")) {
    if (k.is_number()) {
      g.wavenumbers.push_back({k.get<double>(), 0.0});
    } else if (k.is_array() && (k.size() == 1 || k.size() == 2)) {
      g.wavenumbers.push_back({k[0].get<double>(), k.size() == 2 ? k[1].get<double>() : 0.0});
    } else {
      throw std::runtime_error("wavenumbers must be numbers or [kx, ky] pairs");
    }
  }
  if (j.contains("xi_range")) {
    const auto& r = j.at("xi_range");
    if (!r.is_array() || r.size() != 2) throw std::runtime_error("xi_range must be [lo, hi]");
    g.xi_lo = r[0].get<double>();
    g.xi_hi = r[1].get<double>();
  }
  g.n_xi = j.value("n_xi", g.n_xi);
  g.horizon = j.value("horizon", g.horizon);
  g.n_t = j.value("n_t", g.n_t);
  const std::string grading = j.value("time_grading", std::string("uniform"));
  if (grading == "uniform")
    g.time_grading = TimeGrading::uniform;
  else if (grading == "geometric")
    g.time_grading = TimeGrading::geometric;
  else
    throw std::runtime_error("unknown time_grading '" + grading + "'");
  g.t_min = j.value("t_min", g.t_min);

  if (j.contains("psi")) {
    const auto& p = j.at("psi");
    c.psi.kind = psi_kind(p.value("kind", std::string("bump")));
    c.psi.radius = p.value("radius", 1.0);
  }
  if (j.contains("field")) {
    const auto& f = j.at("field");
    const std::string mode = f.value("mode", std::string("identity"));
    if (mode == "identity") {
      c.field.mode = FieldMode::identity;
    } else if (mode == "general") {
      c.field.mode = FieldMode::general;
    } else {
      throw std::runtime_error("unknown field mode '" + mode + "'");
    }
    c.field.curve = curve_kind(f.value("curve", std::string("identity")));
    c.field.alpha = f.value("alpha", 1.0);
    c.field.A = f.value("A", 1.0);
  }
  g.scalar_velocity = c.field.mode == FieldMode::general;
  g.psi_radius = c.psi.radius;

  if (j.contains("data")) {
    const auto& d = j.at("data");
    c.data.generator = d.value("generator", c.data.generator);
    if (d.contains("center")) {
      const auto& ce = d.at("center");
      if (ce.is_number()) {
        c.data.profile.center = {ce.get<double>(), 0.0};
      } else {
        c.data.profile.center = {ce.at(0).get<double>(), ce.size() > 1 ? ce.at(1).get<double>() : 0.0};
      }
    }
    c.data.profile.width = d.value("width", c.data.profile.width);
    c.data.profile.amplitude = d.value("amplitude", c.data.profile.amplitude);
    c.data.t_box = d.value("t_box", c.data.t_box);
    c.data.node_a = d.value("node_a", c.data.node_a);
    c.data.node_b = d.value("node_b", c.data.node_b);
  }
  c.case_tag = j.value("case", c.case_tag);
  if (std::find(case_tags().begin(), case_tags().end(), c.case_tag) == case_tags().end())
    throw std::runtime_error("unknown case tag '" + c.case_tag + "'");
  if (j.contains("sweep")) {
    const auto& s = j.at("sweep");
    c.sweep.parameter = s.value("parameter", std::string());
    c.sweep.values = s.value("values", std::vector<double>{});
  }
  if (j.contains("estimator")) {
    const auto& e = j.at("estimator");
    c.estimator.kind = e.value("kind", c.estimator.kind);
    if (c.estimator.kind != "oracle" && c.estimator.kind != "mc")
      throw std::runtime_error("estimator kind must be 'oracle' or 'mc'");
    c.estimator.n_paths = e.value("N", c.estimator.n_paths);
    c.estimator.n_batches = e.value("batches", c.estimator.n_batches);
    c.estimator.seed = e.value("seed", c.estimator.seed);
  }
  c.lambda = j.value("lambda", c.lambda);
  c.beta = j.value("beta", c.beta);
  c.output = j.value("output", std::string());
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  const auto& g = c.grid;
  j["dimension"] = g.dimension;
  json ks = json::array();
  for (const auto& k : g.wavenumbers) {
    if (g.dimension == 1)
      ks.push_back(k.x);
    else
      ks.push_back({k.x, k.y});
  }
  j["wavenumbers"] = ks;
  j["xi_range"] = {g.xi_lo, g.xi_hi};
  j["n_xi"] = g.n_xi;
  j["horizon"] = g.horizon;
  j["n_t"] = g.n_t;
  j["time_grading"] = g.time_grading == TimeGrading::uniform ? "uniform" : "geometric";
  j["t_min"] = g.t_min;
  j["psi"] = {{"kind", to_string(c.psi.kind)}, {"radius", c.psi.radius}};
  j["field"] = {{"mode", to_string(c.field.mode)},
                {"curve", to_string(c.field.curve)},
                {"alpha", c.field.alpha},
                {"A", c.field.A}};
  j["data"] = {{"generator", c.data.generator},
               {"center", {c.data.profile.center.x, c.data.profile.center.y}},
               {"width", c.data.profile.width},
               {"amplitude", c.data.profile.amplitude},
               {"t_box", c.data.t_box},
               {"node_a", c.data.node_a},
               {"node_b", c.data.node_b}};
  j["case"] = c.case_tag;
  j["sweep"] = {{"parameter", c.sweep.parameter}, {"values", c.sweep.values}};
  j["estimator"] = {{"kind", c.estimator.kind},
                    {"N", c.estimator.n_paths},
                    {"batches", c.estimator.n_batches},
                    {"seed", c.estimator.seed}};
  j["lambda"] = c.lambda;
  j["beta"] = c.beta;
  j["output"] = c.output;
  return j;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  if (text.find_first_not_of(" \t\r\n") == std::string::npos)
    throw std::runtime_error("config file '" + path + "' is empty");
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("config parse error in '" + path + "': " + e.what());
  }
  try {
    return config_from_json(j);
  } catch (const json::exception& e) {
    throw std::runtime_error("config error in '" + path + "': " + e.what());
  }
}

ExperimentConfig canonical_config() {
  ExperimentConfig c;
  c.grid.dimension = 1;
  c.grid.wavenumbers = wavenumber_ladder(16);
  c.grid.xi_lo = -1.0;
  c.grid.xi_hi = 1.0;
  c.grid.n_xi = 17;
  c.grid.horizon = horizon_for(1.0);
  c.grid.n_t = 256;
  c.grid.time_grading = TimeGrading::geometric;
  c.grid.t_min = 1e-4;
  c.grid.psi_radius = 1.0;
  c.case_tag = "g0_stoch";
  c.lambda = 1.0;
  c.estimator.kind = "mc";
  return c;
}

SpectralGrid make_grid(const ExperimentConfig& c) {
  GridSpec g = c.grid;
  g.scalar_velocity = c.field.mode == FieldMode::general;
  g.psi_radius = c.psi.radius;
  return build_grid(g);
}

TestFunction make_psi(const ExperimentConfig& c) { return TestFunction(c.psi.kind, c.psi.radius); }

VelocityField make_field(const ExperimentConfig& c) {
  if (c.field.mode == FieldMode::identity) return VelocityField::identity(c.grid.dimension);
  return VelocityField::curve(c.field.curve, c.grid.dimension, c.field.alpha, c.field.A);
}

KineticData make_data(const ExperimentConfig& c, const SpectralGrid& grid) {
  const auto& d = c.data;
  if (d.generator == "gaussian_bump") return gaussian_bump(grid, d.profile);
  if (d.generator == "two_point") return two_point(grid, d.node_a, d.node_b);
  if (d.generator == "time_box_source") return time_box_source(grid, d.profile, d.t_box);
  if (d.generator == "div_source") return div_source(grid, d.profile, d.t_box);
  throw std::runtime_error("unknown data generator '" + d.generator + "'");
}

}  // namespace kal
