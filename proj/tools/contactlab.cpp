// contactlab: batch verification runs and catalog listing.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "contactlab/catalog.hpp"
#include "contactlab/cli/runner.hpp"
#include "contactlab/error.hpp"

using namespace contactlab;
using nlohmann::json;

namespace {

int run_command(const std::string& config_path, const cli::Overrides& ov, const std::vector<std::string>& tol_flags,
                const std::string& output) {
  json j;
  {
    std::ifstream in(config_path);
    if (!in) {
      std::cerr << "error: cannot open config '" << config_path << "'\n";
      return 2;
    }
    try {
      j = json::parse(in);
    } catch (const json::parse_error& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return 2;
    }
  }
  cli::RunResult result;
  try {
    cli::Overrides full = ov;
    for (const auto& t : tol_flags) full.tolerances.push_back(cli::parse_tolerance_flag(t));
    const cli::RunConfig cfg = cli::parse_config(j, full);
    result = cli::run(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error at " << e.what() << "\n";
    return 2;
  }

  const std::string text = result.report.dump(2) + "\n";
  if (output.empty() || output == "-") {
    std::cout << text;
  } else {
    std::ofstream out(output);
    if (!out) {
      std::cerr << "error: cannot write '" << output << "'\n";
      return 2;
    }
    out << text;
  }
  std::cerr << "status: " << result.report["status"].get<std::string>();
  for (const auto& v : result.report["violations"]) std::cerr << "\n  violation: " << v.get<std::string>();
  std::cerr << "\n";
  return result.exit_code;
}

int catalog_command(const std::string& filter, const std::string& show) {
  if (!show.empty()) {
    try {
      const auto e = immersion::catalog(show);
      json j = {{"name", e.name},
                {"description", e.description},
                {"ambient", {{"name", e.ambient.name()}, {"n", e.ambient.n()}}},
                {"variables", e.immersion.variables()},
                {"components", e.immersion.component_text()},
                {"exclusions", e.immersion.exclusion_text()}};
      json dom = json::array();
      for (const auto& iv : e.immersion.domain()) dom.push_back({iv.lo, iv.hi});
      j["domain"] = dom;
      std::cout << j.dump(2) << "\n";
      return 0;
    } catch (const GeometryError& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 2;
    }
  }
  for (const auto& info : immersion::catalog_list(filter)) std::cout << info.name << "\t" << info.description << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification of submanifolds in almost contact metric manifolds"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run the configured suites and write a JSON report");
  std::string config_path, output;
  std::vector<std::string> tol_flags;
  cli::Overrides ov;
  int samples = 0, threads = 0;
  std::uint64_t seed = 0;
  run->add_option("--config", config_path, "Config file (JSON)")->required()->check(CLI::ExistingFile);
  auto* samples_opt = run->add_option("--samples", samples, "Sample points (default 100)")->check(CLI::PositiveNumber);
  auto* seed_opt = run->add_option("--seed", seed, "Sampling seed (default 42)");
  run->add_option("--tol", tol_flags, "Tolerance override NAME=VAL (repeatable)");
  run->add_option("--output", output, "Report path (default stdout)");
  run->add_option("--suite", ov.suites, "Suite to run (repeatable)")
      ->check(CLI::IsMember({"structure", "tangency", "semislant", "lemmas", "warped"}));
  auto* threads_opt = run->add_option("--threads", threads, "Worker threads (default 1)")->check(CLI::Range(1, 256));

  auto* cat = app.add_subcommand("catalog", "List built-in immersions");
  std::string filter, show;
  cat->add_option("--filter", filter, "Substring filter on names and descriptions");
  cat->add_option("--show", show, "Print one entry as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  if (*run) {
    if (*samples_opt) ov.samples = samples;
    if (*seed_opt) ov.seed = seed;
    if (*threads_opt) ov.threads = threads;
    return run_command(config_path, ov, tol_flags, output);
  }
  return catalog_command(filter, show);
}
