// SPDX-License-Identifier: Apache-2.0
#include <catch2/catch_amalgamated.hpp>

#include <json.hpp>
#include <sstream>

#include "ccss/cli.hpp"
#include "ccss/scenario.hpp"
#include "ccss/table.hpp"

using namespace ccss;
using Catch::Approx;

namespace {

const char* kMinimalScenario = R"({
  "name": "mini",
  "network": {
    "k": 1,
    "samples_per_window": 10,
    "target_local_pf": 0.1,
    "sensing_m": 1.0,
    "reporting_m": 1.0,
    "sensing_snr_db": [10.0],
    "reporting_snr_db": [10.0],
    "fusion_rule": "counting",
    "count_threshold": 1
  },
  "experiment": {
    "trials": 2000,
    "seed": 9,
    "pf_grid": {"kind": "list", "values": [0.1, 0.2, 0.3]}
  }
})";

std::string write_temp(const std::string& text, const std::string& name) {
  std::string path = "/tmp/ccss_test_" + name + ".json";
  std::ofstream f(path);
  f << text;
  return path;
}

// minimal CSV reader for the round-trip check
std::vector<std::vector<double>> parse_csv_rows(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream is(text);
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (header) { header = false; continue; }
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

TEST_CASE("scenario parsing") {
  SECTION("minimal scenario round-trips into a network") {
    auto sf = scenario::parse(kMinimalScenario);
    CHECK(sf.network.k_total() == 1);
    CHECK(sf.network.n_samples == 10);
    CHECK(sf.trials == 2000);
    CHECK(sf.pf_grid.materialize() == std::vector<double>{0.1, 0.2, 0.3});
  }
  SECTION("unknown keys are rejected with their location") {
    std::string bad = kMinimalScenario;
    bad.replace(bad.find("\"name\""), 6, "\"nome\"");
    CHECK_THROWS_WITH(scenario::parse(bad),
                      Catch::Matchers::ContainsSubstring("nome"));
    std::string bad2 = kMinimalScenario;
    bad2.replace(bad2.find("\"k\""), 3, "\"kk\"");
    CHECK_THROWS_WITH(scenario::parse(bad2),
                      Catch::Matchers::ContainsSubstring("network"));
  }
  SECTION("parse errors carry a line number") {
    std::string broken = "{\n  \"name\": \"x\",\n  oops\n}";
    CHECK_THROWS_WITH(scenario::parse(broken),
                      Catch::Matchers::ContainsSubstring("line 3"));
  }
  SECTION("fading severity below one half is rejected") {
    std::string bad = kMinimalScenario;
    bad.replace(bad.find("\"sensing_m\": 1.0"), 16, "\"sensing_m\": 0.3");
    CHECK_THROWS_WITH(scenario::parse(bad),
                      Catch::Matchers::ContainsSubstring(">= 0.5"));
  }
  SECTION("non-increasing pf grids are rejected") {
    std::string bad = kMinimalScenario;
    bad.replace(bad.find("[0.1, 0.2, 0.3]"), 15, "[0.3, 0.2, 0.1]");
    CHECK_THROWS_AS(scenario::parse(bad), scenario::SchemaError);
  }
  SECTION("k mismatch in arrays is rejected") {
    std::string bad = kMinimalScenario;
    bad.replace(bad.find("\"sensing_snr_db\": [10.0]"), 24,
                "\"sensing_snr_db\": [10.0, 3.0]");
    CHECK_THROWS_WITH(scenario::parse(bad),
                      Catch::Matchers::ContainsSubstring("K entries"));
  }
}

TEST_CASE("cli behaviour") {
  std::string path = write_temp(kMinimalScenario, "mini");

  SECTION("three grid points produce three data rows plus a header") {
    std::ostringstream out, err;
    int rc = cli::run({"local-roc", "--scenario", path}, out, err);
    REQUIRE(rc == 0);
    auto rows = parse_csv_rows(out.str());
    CHECK(rows.size() == 3);
    for (const auto& r : rows) {
      CHECK(r.size() == 6);
      for (std::size_t c : {0u, 2u, 3u, 4u}) {
        CHECK(r[c] >= 0.0);
        CHECK(r[c] <= 1.0);  // every emitted probability in [0,1]
      }
    }
  }
  SECTION("croc rows are the pointwise complement of roc rows") {
    std::ostringstream roc_out, croc_out, err;
    REQUIRE(cli::run({"local-roc", "--scenario", path}, roc_out, err) == 0);
    REQUIRE(cli::run({"croc", "--scenario", path}, croc_out, err) == 0);
    auto roc = parse_csv_rows(roc_out.str());
    auto croc = parse_csv_rows(croc_out.str());
    for (std::size_t i = 0; i < roc.size(); ++i) {
      CHECK(croc[i][2] == Approx(1.0 - roc[i][2]).margin(1e-9));
      CHECK(croc[i][4] == Approx(1.0 - roc[i][4]).margin(1e-9));
    }
  }
  SECTION("schema errors exit with code 2 and a message") {
    std::string bad = write_temp("{\"network\": {\"k\": 0}}", "bad");
    std::ostringstream out, err;
    CHECK(cli::run({"local-roc", "--scenario", bad}, out, err) == 2);
    CHECK(err.str().find("ccss:") != std::string::npos);
    CHECK(cli::run({"local-roc", "--scenario", "/nonexistent.json"}, out, err) == 2);
  }
  SECTION("byte-identical output across runs and worker counts") {
    std::ostringstream a, b, c, err;
    REQUIRE(cli::run({"local-roc", "--scenario", path}, a, err) == 0);
    REQUIRE(cli::run({"local-roc", "--scenario", path}, b, err) == 0);
    REQUIRE(cli::run({"local-roc", "--scenario", path, "--workers", "4"}, c, err) == 0);
    CHECK(a.str() == b.str());
    CHECK(a.str() == c.str());
  }
  SECTION("json mirror parses and matches the csv values") {
    std::ostringstream out, err;
    REQUIRE(cli::run({"local-roc", "--scenario", path, "--format", "json"}, out, err) == 0);
    auto doc = nlohmann::json::parse(out.str());
    CHECK(doc.at("columns").size() == 6);
    CHECK(doc.at("rows").size() == 3);
  }
  SECTION("complexity table rows") {
    std::ostringstream out, err;
    REQUIRE(cli::run({"complexity", "--k", "1", "--x", "2"}, out, err) == 0);
    CHECK(out.str().find("6,60,384") != std::string::npos);
  }
}

TEST_CASE("table formatting") {
  table::Table t;
  t.name = "demo";
  t.columns = {"a", "b"};
  t.add_row({1.0 / 3.0, 123456789.123});
  std::ostringstream os;
  table::write_csv(t, os);
  CHECK(os.str() == "a,b\n0.333333333,123456789\n");
  CHECK_THROWS_AS(t.add_row({1.0}), std::invalid_argument);
}
