#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "kal/battery.hpp"
#include "kal/config.hpp"
#include "kal/csv.hpp"
#include "kal/mc.hpp"
#include "kal/oracle.hpp"
#include "kal/scaling.hpp"
#include "kal/solver.hpp"

#ifndef KAL_GOLDEN_FILE
#define KAL_GOLDEN_FILE "data/golden.json"
#endif

namespace fs = std::filesystem;
using namespace kal;

namespace {

// Usage and configuration problems exit 1; failed in-run assertions exit 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string config;
  unsigned threads = 1;
  std::optional<std::uint64_t> seed;
  std::string output;
  std::string golden = KAL_GOLDEN_FILE;
};

ExperimentConfig load(const Common& c) {
  ExperimentConfig cfg = c.config.empty() ? canonical_config() : load_config(c.config);
  if (const char* env = std::getenv("KAL_SEED")) {
    try {
      cfg.estimator.seed = std::stoull(env);
    } catch (const std::exception&) {
      throw UsageError(std::string("KAL_SEED is not an unsigned integer: '") + env + "'");
    }
  }
  if (c.seed) cfg.estimator.seed = *c.seed;
  return cfg;
}

std::uint64_t master_seed(const Common& c) { return load(c).estimator.seed; }

// Writes to --output (a file) or stdout.
template <class F>
void emit(const Common& c, F&& write) {
  if (c.output.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream out(c.output);
  if (!out) throw UsageError("cannot write output file '" + c.output + "'");
  write(out);
}

fs::path output_dir(const Common& c, const char* fallback) {
  fs::path dir = c.output.empty() ? fs::path(fallback) : fs::path(c.output);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw UsageError("cannot create output directory '" + dir.string() + "'");
  return dir;
}

GoldenConstants golden(const Common& c) {
  try {
    return GoldenConstants::load(c.golden);
  } catch (const std::exception& e) {
    std::cerr << "warning: " << e.what() << "; bound checks will fail until `calibrate` is run\n";
    return {};
  }
}

void print_outcome(const CheckOutcome& o) {
  std::cerr << (o.pass ? "PASS" : "FAIL") << "  [" << o.criterion << "] " << o.title << '\n';
  for (const auto& n : o.notes) std::cerr << "      " << n << '\n';
  for (const auto& f : o.failures) std::cerr << "      failed: " << f << '\n';
}

std::vector<double> sweep_values(const ExperimentConfig& cfg, const std::string& parameter) {
  if (cfg.sweep.parameter == parameter && !cfg.sweep.values.empty()) return cfg.sweep.values;
  if (!cfg.sweep.parameter.empty() && cfg.sweep.parameter != parameter)
    throw UsageError("config sweeps '" + cfg.sweep.parameter + "', not '" + parameter + "'");
  return {};
}

ResultRow base_row(const ExperimentConfig& cfg, const SpectralGrid& grid, std::size_t k, const std::string& est) {
  ResultRow r;
  r.experiment_id = cfg.case_tag + ".k=" + format_double(norm(grid.wavenumbers[k]));
  r.case_tag = cfg.case_tag;
  r.k_index = static_cast<long>(k);
  r.k_mag = norm(grid.wavenumbers[k]);
  r.estimator = est;
  if (cfg.field.mode == FieldMode::general) r.alpha = cfg.field.alpha;
  return r;
}

// ---------------------------------------------------------------------------------------------

int cmd_paths(const Common& c, std::size_t count) {
  const auto cfg = load(c);
  const auto grid = make_grid(cfg);
  emit(c, [&](std::ostream& os) {
    os << timestamp_comment() << "\npath_id,t,B\n";
    for (std::size_t i = 0; i < count; ++i) {
      const auto p = sample_path(grid, path_seed(cfg.estimator.seed, i));
      for (std::size_t j = 0; j < p.times.size(); ++j)
        os << i << ',' << format_double(p.times[j]) << ',' << format_double(p.values[j]) << '\n';
    }
  });
  return 0;
}

int cmd_solve(const Common& c, std::size_t path_id, const std::string& mode) {
  const auto cfg = load(c);
  const auto grid = make_grid(cfg);
  const auto data = make_data(cfg, grid);
  DrivingPath path;
  if (mode == "brownian")
    path = sample_path(grid, path_seed(cfg.estimator.seed, path_id));
  else if (mode == "linear")
    path = linear_path(grid);
  else if (mode == "frozen")
    path = frozen_path(grid);
  else
    throw UsageError("unknown path mode '" + mode + "'");
  const auto trace = solve_trace(grid, data, make_field(cfg), path, make_psi(cfg));
  emit(c, [&](std::ostream& os) {
    os << timestamp_comment() << "\nk_index,t,re_rho,im_rho\n";
    for (std::size_t k = 0; k < trace.n_k; ++k)
      for (std::size_t j = 0; j < trace.n_t; ++j)
        os << k << ',' << format_double(grid.times[j]) << ',' << format_double(trace(k, j).real()) << ','
           << format_double(trace(k, j).imag()) << '\n';
  });
  return 0;
}

double oracle_value(const ExperimentConfig& cfg, const SpectralGrid& grid, const KineticData& data,
                    const VelocityField& field, const TestFunction& psi, double lambda, std::size_t k) {
  // Energies over the simulated window [0, T_grid], so `mc --check` compares like with like.
  const double horizon = grid.horizon();
  if (cfg.case_tag == "g0_stoch") return energy_g0_stochastic(grid, data, field, psi, lambda, k, horizon);
  if (cfg.case_tag == "g0_det") return energy_g0_deterministic(grid, data, field, psi, lambda, k, horizon);
  if (cfg.case_tag == "f0zero") return energy_f0zero_stochastic(grid, data, field, psi, lambda, k, horizon);
  if (cfg.case_tag == "time_reg") return gagliardo_g0(grid, data, field, psi, lambda, cfg.beta, k);
  throw UsageError("no oracle for case '" + cfg.case_tag + "'");
}

int cmd_oracle(const Common& c) {
  const auto cfg = load(c);
  const auto grid = make_grid(cfg);
  const auto data = make_data(cfg, grid);
  const auto field = make_field(cfg);
  const auto psi = make_psi(cfg);
  auto lambdas = sweep_values(cfg, "lambda");
  if (lambdas.empty()) lambdas = {cfg.lambda};
  std::vector<ResultRow> rows;
  bool ok = true;
  for (double l : lambdas)
    for (std::size_t k = 0; k < grid.n_k(); ++k) {
      auto r = base_row(cfg, grid, k, "oracle");
      r.experiment_id += ".lambda=" + format_double(l);
      r.lambda = l;
      if (cfg.case_tag == "div") {
        const double lk = l > 0.0 ? l : select_lambda_div(*r.k_mag);
        const auto b = div_case_bound(data_norms(grid, data, field, psi, k, lk), lk, *r.k_mag);
        r.lambda = lk;
        r.value = b.total;
      } else {
        r.value = oracle_value(cfg, grid, data, field, psi, l, k);
        if (cfg.case_tag == "time_reg") r.beta = cfg.beta;
      }
      if (!std::isfinite(*r.value)) ok = false;
      rows.push_back(std::move(r));
    }
  emit(c, [&](std::ostream& os) { write_results(os, rows); });
  return ok ? 0 : 2;
}

int cmd_mc(const Common& c, const std::string& case_tag, std::size_t instances, bool check) {
  auto cfg = load(c);
  if (!case_tag.empty()) {
    if (std::find(case_tags().begin(), case_tags().end(), case_tag) == case_tags().end())
      throw UsageError("unknown case tag '" + case_tag + "'");
    cfg.case_tag = case_tag;
  }
  if (cfg.case_tag == "pathwise") {
    Battery b(GoldenConstants{}, {c.threads, cfg.estimator.seed});
    auto o = b.pathwise(instances);
    o.criterion = 11;
    emit(c, [&](std::ostream& os) { write_results(os, o.rows); });
    print_outcome(o);
    return o.pass ? 0 : 2;
  }
  const auto grid = make_grid(cfg);
  const auto data = make_data(cfg, grid);
  const auto field = make_field(cfg);
  const auto psi = make_psi(cfg);
  FunctionalSpec spec;
  spec.lambda = cfg.case_tag == "div" ? 0.0 : cfg.lambda;
  spec.beta = cfg.beta;
  spec.kind = cfg.case_tag == "time_reg" ? FunctionalKind::gagliardo : FunctionalKind::damped_energy;
  if (cfg.case_tag == "g0_det") spec.path_mode = PathMode::linear;
  McOptions mo;
  mo.n_paths = cfg.estimator.n_paths;
  mo.n_batches = cfg.estimator.n_batches;
  mo.master_seed = cfg.estimator.seed;
  mo.threads = c.threads;
  const auto est = estimate(spec, grid, data, field, psi, mo);
  std::vector<ResultRow> rows;
  bool ok = true;
  for (std::size_t k = 0; k < est.size(); ++k) {
    auto r = base_row(cfg, grid, k, spec.path_mode == PathMode::linear ? "quadrature" : "mc");
    r.lambda = spec.lambda;
    if (spec.kind == FunctionalKind::gagliardo) r.beta = spec.beta;
    r.value = est[k].value;
    r.stderr_ = est[k].stderr_;
    r.n_paths = static_cast<long>(est[k].n_paths);
    r.seed = est[k].master_seed;
    if (check && cfg.case_tag != "div") {
      const double o = oracle_value(cfg, grid, data, field, psi, spec.lambda, k);
      const double rel = cfg.case_tag == "time_reg" ? 0.10 : 0.02;
      r.bound = o;
      r.pass = std::abs(est[k].value - o) <= std::max(4.0 * est[k].stderr_, rel * std::abs(o));
      ok = ok && *r.pass;
    }
    rows.push_back(std::move(r));
  }
  emit(c, [&](std::ostream& os) { write_results(os, rows); });
  return ok ? 0 : 2;
}

int cmd_kernels_verify(const Common& c) {
  Battery b(golden(c), {c.threads, master_seed(c)});
  const auto o = b.kernels_verify();
  emit(c, [&](std::ostream& os) { write_results(os, o.rows); });
  print_outcome(o);
  return o.pass ? 0 : 2;
}

int cmd_fit(const Common& c, const std::string& case_tag, const std::string& sweep, const std::string& input,
            std::optional<double> expected, double tol) {
  if (sweep != "lambda" && sweep != "k_mag") throw UsageError("--sweep must be 'lambda' or 'k_mag'");
  std::vector<std::pair<double, double>> pts;
  if (!input.empty()) {
    std::ifstream in(input);
    if (!in) throw UsageError("cannot open input '" + input + "'");
    std::vector<std::string> header;
    const auto rows = read_csv(in, &header);
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
    for (const char* need : {"case", "value"})
      if (!col.count(need)) throw UsageError(std::string("input is missing column '") + need + "'");
    if (!col.count(sweep)) throw UsageError("input is missing column '" + sweep + "'");
    for (const auto& r : rows) {
      if (!case_tag.empty() && r[col["case"]] != case_tag) continue;
      if (r[col[sweep]].empty() || r[col["value"]].empty()) continue;
      pts.push_back({std::stod(r[col[sweep]]), std::stod(r[col["value"]])});
    }
  } else {
    if (case_tag != "g0_stoch" || sweep != "lambda")
      throw UsageError("without --input only '--case g0_stoch --sweep lambda' is available");
    auto cfg = c.config.empty() ? canonical_config() : load(c);
    if (c.config.empty()) {
      cfg.grid.wavenumbers = {{16.0, 0.0}};
      cfg.grid.n_xi = 129;
      cfg.grid.n_t = 4;
      cfg.grid.horizon = 1.0;
      cfg.grid.time_grading = TimeGrading::uniform;
    }
    auto lambdas = sweep_values(cfg, "lambda");
    if (lambdas.empty())
      for (int e = -6; e <= -1; ++e) lambdas.push_back(std::ldexp(1.0, e));
    const auto grid = make_grid(cfg);
    const auto data = make_data(cfg, grid);
    const auto field = make_field(cfg);
    const auto psi = make_psi(cfg);
    for (double l : lambdas) pts.push_back({l, energy_g0_stochastic(grid, data, field, psi, l, 0)});
    if (!expected) expected = -0.5;
  }
  if (pts.size() < 3) throw UsageError("need at least 3 sweep points, found " + std::to_string(pts.size()));
  const auto f = fit_exponent(pts);
  FitRow row{(case_tag.empty() ? std::string("all") : case_tag) + "." + sweep, f.exponent, f.half_width,
             f.r_squared, expected.value_or(std::nan("")), true};
  if (expected) row.pass = std::abs(f.exponent - *expected) <= tol;
  emit(c, [&](std::ostream& os) { write_fits(os, {row}); });
  return row.pass ? 0 : 2;
}

// Splits battery CSVs into the per-figure files the plotting side reads.
int cmd_report_data(const Common& c, const std::string& input_dir) {
  const fs::path in_dir(input_dir);
  const fs::path out_dir = output_dir(c, "report-data");
  std::ifstream rin(in_dir / "results.csv");
  if (!rin) throw UsageError("cannot open '" + (in_dir / "results.csv").string() + "'");
  std::vector<std::string> header;
  const auto rows = read_csv(rin, &header);
  if (header.empty() || header[0] != "experiment_id") throw UsageError("results.csv does not have the result schema");
  const std::vector<std::pair<std::string, std::vector<std::string>>> figures = {
      {"scaling", {"c4.", "c7.kernel_l1_norm", "c10.div_two_term"}},
      {"bounds", {"c3.", "c5.", "c6.", "c7.g0_stoch", "c10.div_energy"}},
      {"time_reg", {"c8.", "c9.", "technic.", "bracket."}},
      {"kernels", {"c1.", "c2.", "c7.nondegeneracy", "c10.minimizer", "div_moment"}},
  };
  for (const auto& [name, prefixes] : figures) {
    std::ofstream out(out_dir / (name + ".csv"));
    if (!out) throw UsageError("cannot write into '" + out_dir.string() + "'");
    out << kResultHeader << '\n';
    for (const auto& r : rows)
      for (const auto& p : prefixes)
        if (r[0].rfind(p, 0) == 0) {
          for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
          out << '\n';
          break;
        }
  }
  std::error_code ec;
  fs::copy_file(in_dir / "fits.csv", out_dir / "fits.csv", fs::copy_options::overwrite_existing, ec);
  if (ec) throw UsageError("cannot copy fits.csv: " + ec.message());
  return 0;
}

int cmd_all(const Common& c) {
  const fs::path dir = output_dir(c, "results");
  Battery b(golden(c), {c.threads, master_seed(c)});
  std::vector<ResultRow> rows;
  std::vector<FitRow> fits;
  bool ok = true;
  for (int n = 1; n <= Battery::kCriteria; ++n) {
    const auto o = b.run(n);
    print_outcome(o);
    ok = ok && o.pass;
    rows.insert(rows.end(), o.rows.begin(), o.rows.end());
    fits.insert(fits.end(), o.fits.begin(), o.fits.end());
  }
  std::ofstream r(dir / "results.csv"), f(dir / "fits.csv");
  if (!r || !f) throw UsageError("cannot write into '" + dir.string() + "'");
  write_results(r, rows);
  write_fits(f, fits);
  return ok ? 0 : 2;
}

int cmd_calibrate(const Common& c) {
  Battery b({}, {c.threads, master_seed(c)});
  const auto g = b.calibrate();
  const std::string path = c.output.empty() ? c.golden : c.output;
  g.save(path);
  for (const auto& [k, v] : g.all()) std::cerr << k << " = " << v << '\n';
  std::cerr << "wrote " << path << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical experiments on stochastic velocity averaging"};
  app.require_subcommand(1);
  Common c;
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* s) {
    s->add_option("--config", c.config, "JSON experiment config");
    s->add_option("--threads", c.threads, "Worker threads (results do not depend on this)")->check(CLI::PositiveNumber);
    s->add_option("--seed", seed, "Master seed (overrides KAL_SEED and the config)");
    s->add_option("--output,-o", c.output, "Output file (or directory for `all`)");
    s->add_option("--golden", c.golden, "Frozen constants file");
  };

  auto* paths = app.add_subcommand("paths", "Sample Brownian paths on the config time grid");
  std::size_t count = 1;
  paths->add_option("--count", count, "Number of paths");
  add_common(paths);

  auto* solve = app.add_subcommand("solve", "Velocity average of one path");
  std::size_t path_id = 0;
  std::string path_mode = "brownian";
  solve->add_option("--path-id", path_id);
  solve->add_option("--path", path_mode, "brownian | linear | frozen");
  add_common(solve);

  auto* oracle = app.add_subcommand("oracle", "Exact expected energies per wavenumber");
  add_common(oracle);

  auto* mc = app.add_subcommand("mc", "Monte-Carlo estimates");
  std::string mc_case;
  std::size_t instances = 100;
  bool check = false;
  mc->add_option("--case", mc_case, "Override the config case tag");
  mc->add_option("--instances", instances, "Instances for the pathwise case");
  mc->add_flag("--check", check, "Compare with the oracle (exit 2 on disagreement)");
  add_common(mc);

  auto* kernels = app.add_subcommand("kernels", "Kernel checks");
  kernels->require_subcommand(1);
  auto* verify = kernels->add_subcommand("verify", "Kernel identity and bound sweep");
  add_common(verify);

  auto* fit = app.add_subcommand("fit", "Log-log exponent fit");
  std::string fit_case = "g0_stoch", sweep = "lambda", input;
  std::optional<double> expected;
  double tol = 0.05;
  fit->add_option("--case", fit_case);
  fit->add_option("--sweep", sweep, "lambda | k_mag");
  fit->add_option("--input", input, "Result CSV to fit instead of running the oracle sweep");
  fit->add_option("--expected", expected, "Expected exponent");
  fit->add_option("--tolerance", tol, "Pass band around the expected exponent");
  add_common(fit);

  auto* report = app.add_subcommand("report-data", "Split battery CSVs into per-figure inputs");
  std::string input_dir = "results";
  report->add_option("--input-dir", input_dir);
  add_common(report);

  auto* all = app.add_subcommand("all", "Run the full battery, writing results.csv and fits.csv");
  add_common(all);

  auto* calibrate = app.add_subcommand("calibrate", "Recompute the frozen constants");
  add_common(calibrate);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  for (auto* s : {paths, solve, oracle, mc, verify, fit, report, all, calibrate})
    if (s->count("--seed")) c.seed = seed;

  try {
    if (*paths) return cmd_paths(c, count);
    if (*solve) return cmd_solve(c, path_id, path_mode);
    if (*oracle) return cmd_oracle(c);
    if (*mc) return cmd_mc(c, mc_case, instances, check);
    if (*verify) return cmd_kernels_verify(c);
    if (*fit) return cmd_fit(c, fit_case, sweep, input, expected, tol);
    if (*report) return cmd_report_data(c, input_dir);
    if (*all) return cmd_all(c);
    if (*calibrate) return cmd_calibrate(c);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
