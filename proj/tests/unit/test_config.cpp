#include <doctest.h>

#include <cstdio>
#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "kal/config.hpp"
#include "kal/csv.hpp"
#include "kal/golden.hpp"

using namespace kal;

namespace {

std::string temp_file(const std::string& name, const std::string& content) {
  const std::string p = "kal_test_" + name;
  std::ofstream(p) << content;
  return p;
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("json round trip") {
    auto c = canonical_config();
    c.case_tag = "f0zero";
    c.data.generator = "time_box_source";
    c.data.t_box = 0.7;
    c.lambda = 0.3;
    c.beta = 0.4;
    c.sweep.parameter = "lambda";
    c.sweep.values = {0.1, 0.2};
    c.field.mode = FieldMode::general;
    c.field.curve = Curve::cubic;
    c.field.alpha = 3.0;
    c.field.A = 0.25;
    const auto j = config_to_json(c);
    const auto back = config_from_json(j);
    CHECK(config_to_json(back) == j);
    CHECK(back.grid.wavenumbers.size() == 16);
    CHECK(back.field.curve == Curve::cubic);
    CHECK(back.sweep.values == std::vector<double>{0.1, 0.2});
  }

  TEST_CASE("canonical configuration builds") {
    const auto c = canonical_config();
    const auto g = make_grid(c);
    CHECK(g.n_k() == 16);
    CHECK(g.n_xi() == 17);
    CHECK(g.time_grading == TimeGrading::geometric);
    CHECK_NOTHROW(make_data(c, g).validate(g));
  }

  TEST_CASE("load errors carry a diagnostic") {
    const auto empty = temp_file("empty.json", "");
    CHECK_THROWS_WITH_AS(load_config(empty), doctest::Contains("empty"), std::runtime_error);
    const auto bad = temp_file("bad.json", "{ \"wavenumbers\": [1, 2,");
    CHECK_THROWS_WITH_AS(load_config(bad), doctest::Contains("parse error"), std::runtime_error);
    const auto tag = temp_file("tag.json", R"({"wavenumbers": [1], "case": "nope"})");
    CHECK_THROWS_WITH_AS(load_config(tag), doctest::Contains("nope"), std::runtime_error);
    CHECK_THROWS_AS(load_config("does/not/exist.json"), std::runtime_error);
    const auto ok = temp_file("ok.json", R"({"wavenumbers": [1, [2, 0]], "n_xi": 9, "n_t": 16})");
    const auto c = load_config(ok);
    CHECK(c.grid.wavenumbers.size() == 2);
    CHECK(c.grid.n_xi == 9);
    for (auto p : {empty, bad, tag, ok}) std::remove(p.c_str());
  }

  TEST_CASE("csv writer round trip") {
    ResultRow r;
    r.experiment_id = "unit";
    r.case_tag = "g0_stoch";
    r.k_index = 3;
    r.k_mag = 4.0;
    r.lambda = 0.1;
    r.value = 1.0 / 3.0;
    r.pass = true;
    std::stringstream ss;
    write_results(ss, {r});
    std::vector<std::string> header;
    const auto rows = read_csv(ss, &header);
    REQUIRE(rows.size() == 1);
    auto col = [&](const std::string& name) {
      const auto it = std::find(header.begin(), header.end(), name);
      REQUIRE(it != header.end());
      return rows[0][static_cast<std::size_t>(it - header.begin())];
    };
    CHECK(std::stod(col("value")) == 1.0 / 3.0);
    CHECK(col("beta").empty());
    CHECK(col("k_index") == "3");
    CHECK(format_double(0.1) == "0.1");
    CHECK(std::stod(format_double(1.0 / 7.0)) == 1.0 / 7.0);
  }

  TEST_CASE("golden constants") {
    GoldenConstants g;
    g.set("C_test", 2.5);
    const std::string p = "kal_test_golden.json";
    g.save(p);
    const auto back = GoldenConstants::load(p);
    CHECK(back.has("C_test"));
    CHECK(back.get("C_test") == 2.5);
    CHECK_THROWS(back.get("missing"));
    std::remove(p.c_str());
  }
}
