#pragma once

// Run configuration: JSON in, validated RunConfig out. Every validation
// failure is a ConfigError whose pointer() addresses the offending value.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "contactlab/catalog.hpp"

namespace contactlab::cli {

inline const std::vector<std::string> kSuiteNames = {"structure", "tangency", "semislant", "lemmas", "warped"};

/// Tolerances by residual key, falling back to the key's category
/// (structural, second_order, angle, chain).
class Tolerances {
 public:
  Tolerances();
  void set(const std::string& name, double value);
  double get(const std::string& key, const std::string& category) const;
  const std::map<std::string, double>& table() const noexcept { return values_; }

 private:
  std::map<std::string, double> values_;
};

struct RunConfig {
  std::optional<std::string> catalog_name;
  std::string ambient_name;
  int ambient_n = 0;
  immersion::Immersion im;
  std::optional<immersion::DomainSplit> split;
  std::optional<immersion::WarpDeclaration> warp;
  int samples = 100;
  std::uint64_t seed = 42;
  int threads = 1;
  Tolerances tolerances;
  std::vector<std::string> suites;

  ambient::AmbientStructure make_ambient() const;
  /// Resolved configuration as JSON (the report's config echo).
  nlohmann::json echo() const;
};

/// Command-line overrides applied on top of the file.
struct Overrides {
  std::optional<int> samples;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  std::vector<std::string> suites;
  std::vector<std::pair<std::string, double>> tolerances;
};

RunConfig parse_config(const nlohmann::json& j, const Overrides& overrides = {});

/// Parses "NAME=VAL". Throws ConfigError on malformed input.
std::pair<std::string, double> parse_tolerance_flag(const std::string& text);

}  // namespace contactlab::cli
