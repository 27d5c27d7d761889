#include <doctest.h>

#include "contactlab/cli/runner.hpp"
#include "contactlab/error.hpp"

using namespace contactlab;
using nlohmann::json;

namespace {

std::string pointer_of(const json& j, const cli::Overrides& ov = {}) {
  try {
    cli::parse_config(j, ov);
  } catch (const ConfigError& e) {
    return e.pointer();
  }
  return "<accepted>";
}

json inline_example() {
  return json::parse(R"cfg({
    "ambient": "euclidean_acm",
    "immersion": {
      "variables": ["u", "v", "w", "t", "z"],
      "components": ["u+v", "-u+v", "t*cos(w)", "t*sin(w)", "w*cos(t)", "w*sin(t)", "z"],
      "domain": [[-1, 1], [-1, 1], [0.5, 1.5], [1.5, 2.5], [-1, 1]],
      "exclusions": ["w - t"]
    },
    "split": {"D": ["u", "v"], "Dtheta": [[0, 0, 1, 0, 0], "t"]},
    "samples": 10
  })cfg");
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("config errors point at the offending value") {
    CHECK(pointer_of(json::array()) == "/");
    CHECK(pointer_of({{"catalog", "nope"}}) == "/catalog");
    CHECK(pointer_of({{"catalog", "example1"}, {"samples", 0}}) == "/samples");
    CHECK(pointer_of({{"catalog", "example1"}, {"colour", 1}}) == "/colour");
    CHECK(pointer_of({{"catalog", "example1"}, {"suites", {"structure", "bogus"}}}) == "/suites/1");
    CHECK(pointer_of({{"catalog", "invariant_r5"}, {"suites", {"warped"}}}) == "/suites/0");
    CHECK(pointer_of({{"catalog", "example1"}, {"tolerances", {{"angle", -1}}}}) == "/tolerances/angle");
    auto j = inline_example();
    j["immersion"]["components"][3] = "t*sin(w";
    CHECK(pointer_of(j) == "/immersion/components/3");
    j = inline_example();
    j["immersion"]["domain"][2] = {2, 1};
    CHECK(pointer_of(j) == "/immersion/domain/2");
    j = inline_example();
    j["split"]["Dtheta"][1] = "q";
    CHECK(pointer_of(j) == "/split/Dtheta/1");
    j = inline_example();
    j["split"]["D"].erase(1);
    CHECK(pointer_of(j) == "/split");
    j = inline_example();
    j["ambient"] = "standard_sasakian";
    j["immersion"]["components"].erase(6);
    CHECK(pointer_of(j) == "/immersion/components");
    j = inline_example();
    j["warp"] = {{"base_vars", {"u", "v", "z"}}, {"fiber_vars", {"w"}}, {"reference_point", {0, 0, 0}}};
    CHECK(pointer_of(j) == "/warp");
  }

  TEST_CASE("defaults, catalog merge and override precedence") {
    auto cfg = cli::parse_config(inline_example());
    CHECK(cfg.suites == std::vector<std::string>{"structure", "tangency", "semislant"});
    CHECK(cfg.seed == 42);
    CHECK(cfg.samples == 10);
    CHECK(cfg.ambient_n == 3);

    cli::Overrides ov;
    ov.samples = 5;
    ov.seed = 9;
    ov.suites = {"semislant", "structure"};
    ov.tolerances = {cli::parse_tolerance_flag("angle=1e-3")};
    cfg = cli::parse_config({{"catalog", "cr_warped_r7"}, {"samples", 50}, {"tolerances", {{"angle", 1e-5}}}}, ov);
    CHECK(cfg.samples == 5);
    CHECK(cfg.seed == 9);
    CHECK(cfg.suites == std::vector<std::string>{"structure", "semislant"});
    CHECK(cfg.tolerances.get("theta", "angle") == 1e-3);
    CHECK(cli::parse_config({{"catalog", "cr_warped_r7"}}).suites.size() == 5);
  }

  TEST_CASE("tolerance flag syntax") {
    CHECK(cli::parse_tolerance_flag("L4=1e-9") == std::pair<std::string, double>{"L4", 1e-9});
    CHECK_THROWS_AS(cli::parse_tolerance_flag("L4"), ConfigError);
    CHECK_THROWS_AS(cli::parse_tolerance_flag("L4=abc"), ConfigError);
    CHECK_THROWS_AS(cli::parse_tolerance_flag("L4=0"), ConfigError);
  }

  TEST_CASE("reports round-trip and are deterministic") {
    auto cfg = cli::parse_config({{"catalog", "cr_warped_r7"}, {"samples", 12}});
    const auto a = cli::run(cfg);
    cfg.threads = 4;
    const auto b = cli::run(cfg);
    CHECK(a.exit_code == 0);
    CHECK(json::parse(a.report.dump()) == a.report);
    CHECK(cli::without_timestamp(a.report).dump() == cli::without_timestamp(b.report).dump());
    for (const auto& s : cfg.suites) CHECK(a.report["suites"].contains(s));
  }

  TEST_CASE("violations give exit code 1") {
    cli::Overrides ov;
    ov.tolerances = {{"gauss", 1e-30}};
    const auto r = cli::run(cli::parse_config({{"catalog", "example1"}, {"samples", 5}}, ov));
    CHECK(r.exit_code == 1);
    CHECK(r.report["violations"] == json::array({"structure/gauss"}));
  }

  TEST_CASE("residual cells are numbers or refusals") {
    const auto r = cli::run(cli::parse_config({{"catalog", "cr_warped_r7"}, {"samples", 4}}));
    for (const auto& [suite, body] : r.report["suites"].items())
      for (const auto& rec : body["records"])
        for (const auto& [key, v] : rec["values"].items()) {
          const bool ok = v.is_number() || (v.is_string() && v.get<std::string>().rfind("refused: ", 0) == 0);
          CHECK_MESSAGE(ok, suite << "/" << key);
        }
    CHECK(r.report["suites"]["lemmas"]["keys"]["L2"]["verdict"] == "refused");
  }

  TEST_CASE("undeclared singular locus needs an exclusion") {
    auto j = inline_example();
    j["immersion"].erase("exclusions");
    j["immersion"]["domain"][2] = {0.5, 2.5};
    j["immersion"]["domain"][3] = {0.5, 2.5};
    j["samples"] = 100;
    try {
      cli::run(cli::parse_config(j));
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("excluded-point predicate required") != std::string::npos);
    }
  }
}
