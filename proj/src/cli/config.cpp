#include "contactlab/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "contactlab/error.hpp"
#include "contactlab/warped.hpp"

namespace contactlab::cli {

using nlohmann::json;

Tolerances::Tolerances()
    : values_{{"structural", 1e-8}, {"second_order", 1e-6}, {"angle", 1e-7}, {"chain", 1e-10}} {}

void Tolerances::set(const std::string& name, double value) { values_[name] = value; }

double Tolerances::get(const std::string& key, const std::string& category) const {
  if (auto it = values_.find(key); it != values_.end()) return it->second;
  if (auto it = values_.find(category); it != values_.end()) return it->second;
  throw Error("no tolerance for '" + key + "' (category '" + category + "')");
}

ambient::AmbientStructure RunConfig::make_ambient() const { return ambient::make_ambient(ambient_name, ambient_n); }

namespace {

std::string child(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }
std::string child(const std::string& ptr, std::size_t i) { return ptr + "/" + std::to_string(i); }

[[noreturn]] void fail(const std::string& ptr, const std::string& what) { throw ConfigError(ptr.empty() ? "/" : ptr, what); }

const json& need_array(const json& j, const std::string& ptr) {
  if (!j.is_array()) fail(ptr, "expected an array");
  return j;
}

double need_number(const json& j, const std::string& ptr) {
  if (!j.is_number()) fail(ptr, "expected a number");
  return j.get<double>();
}

std::string need_string(const json& j, const std::string& ptr) {
  if (!j.is_string()) fail(ptr, "expected a string");
  return j.get<std::string>();
}

long long need_integer(const json& j, const std::string& ptr) {
  if (!j.is_number_integer()) fail(ptr, "expected an integer");
  return j.get<long long>();
}

void allow_keys(const json& j, const std::string& ptr, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(ptr, "expected an object");
  for (const auto& [k, _] : j.items()) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* a) { return k == a; })) {
      fail(child(ptr, k), "unknown key");
    }
  }
}

immersion::Immersion parse_immersion(const json& j, const std::string& ptr) {
  allow_keys(j, ptr, {"variables", "components", "domain", "exclusions"});
  for (const char* key : {"variables", "components", "domain"}) {
    if (!j.contains(key)) fail(child(ptr, key), "missing required key");
  }
  std::vector<std::string> vars, comps, excl;
  std::vector<immersion::Interval> box;
  const auto vp = child(ptr, "variables");
  for (std::size_t i = 0; i < need_array(j["variables"], vp).size(); ++i) {
    const std::string name = need_string(j["variables"][i], child(vp, i));
    const bool ident = !name.empty() && (std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_') &&
                       std::all_of(name.begin(), name.end(), [](char ch) {
                         return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_';
                       });
    if (!ident) fail(child(vp, i), "variable names must be identifiers");
    if (std::find(vars.begin(), vars.end(), name) != vars.end()) fail(child(vp, i), "duplicate variable name");
    vars.push_back(name);
  }
  if (vars.empty()) fail(vp, "at least one variable is required");

  const auto cp = child(ptr, "components");
  for (std::size_t i = 0; i < need_array(j["components"], cp).size(); ++i) {
    comps.push_back(need_string(j["components"][i], child(cp, i)));
    try {
      numjet::parse_expr(comps.back(), vars);
    } catch (const ParseError& e) {
      fail(child(cp, i), e.what());
    }
  }
  const auto dp = child(ptr, "domain");
  const json& dom = need_array(j["domain"], dp);
  if (dom.size() != vars.size()) fail(dp, "expected one [lo, hi] interval per variable");
  for (std::size_t i = 0; i < dom.size(); ++i) {
    const auto ip = child(dp, i);
    if (!dom[i].is_array() || dom[i].size() != 2) fail(ip, "expected [lo, hi]");
    const double lo = need_number(dom[i][0], child(ip, 0)), hi = need_number(dom[i][1], child(ip, 1));
    if (!(lo <= hi)) fail(ip, "lo must not exceed hi");
    box.push_back({lo, hi});
  }
  if (j.contains("exclusions")) {
    const auto ep = child(ptr, "exclusions");
    for (std::size_t i = 0; i < need_array(j["exclusions"], ep).size(); ++i) {
      excl.push_back(need_string(j["exclusions"][i], child(ep, i)));
      try {
        numjet::parse_expr(excl.back(), vars);
      } catch (const ParseError& e) {
        fail(child(ep, i), e.what());
      }
    }
  }
  return immersion::Immersion::from_strings(vars, comps, box, excl);
}

int variable_index(const json& j, const std::string& ptr, const immersion::Immersion& im) {
  if (j.is_string()) {
    const auto& vars = im.variables();
    const auto it = std::find(vars.begin(), vars.end(), j.get<std::string>());
    if (it == vars.end()) fail(ptr, "unknown variable '" + j.get<std::string>() + "'");
    return static_cast<int>(it - vars.begin());
  }
  const long long i = need_integer(j, ptr);
  if (i < 0 || i >= im.k()) fail(ptr, "variable index out of range");
  return static_cast<int>(i);
}

// A domain vector: an array of k numbers, or a variable name for its unit vector.
numjet::Vector domain_vector(const json& j, const std::string& ptr, const immersion::Immersion& im) {
  if (j.is_string()) return numjet::Vector::Unit(im.k(), variable_index(j, ptr, im));
  if (!j.is_array() || static_cast<int>(j.size()) != im.k()) {
    fail(ptr, "expected a variable name or an array of " + std::to_string(im.k()) + " numbers");
  }
  numjet::Vector v(im.k());
  for (int i = 0; i < im.k(); ++i) v(i) = need_number(j[static_cast<std::size_t>(i)], child(ptr, static_cast<std::size_t>(i)));
  if (v.norm() == 0.0) fail(ptr, "zero vector");
  return v;
}

immersion::DomainSplit parse_split(const json& j, const std::string& ptr, const immersion::Immersion& im) {
  allow_keys(j, ptr, {"D", "Dtheta", "xi"});
  immersion::DomainSplit s;
  for (const char* key : {"D", "Dtheta"}) {
    const auto kp = child(ptr, key);
    if (!j.contains(key)) continue;
    auto& out = std::string(key) == "D" ? s.D : s.Dtheta;
    for (std::size_t i = 0; i < need_array(j[key], kp).size(); ++i) out.push_back(domain_vector(j[key][i], child(kp, i), im));
  }
  if (j.contains("xi")) s.xi = domain_vector(j["xi"], child(ptr, "xi"), im);
  if (static_cast<int>(s.D.size() + s.Dtheta.size()) + 1 != im.k()) {
    fail(ptr, "dim D + dim Dtheta + 1 must equal the number of variables (" + std::to_string(im.k()) + ")");
  }
  return s;
}

immersion::WarpDeclaration parse_warp(const json& j, const std::string& ptr, const immersion::Immersion& im) {
  allow_keys(j, ptr, {"base_vars", "fiber_vars", "reference_point"});
  immersion::WarpDeclaration w;
  for (const char* key : {"base_vars", "fiber_vars", "reference_point"}) {
    if (!j.contains(key)) fail(child(ptr, key), "missing required key");
  }
  for (const char* key : {"base_vars", "fiber_vars"}) {
    const auto kp = child(ptr, key);
    auto& out = std::string(key) == "base_vars" ? w.base_vars : w.fiber_vars;
    for (std::size_t i = 0; i < need_array(j[key], kp).size(); ++i) out.push_back(variable_index(j[key][i], child(kp, i), im));
  }
  const auto rp = child(ptr, "reference_point");
  const json& ref = need_array(j["reference_point"], rp);
  w.reference_point.resize(static_cast<Eigen::Index>(ref.size()));
  for (std::size_t i = 0; i < ref.size(); ++i) w.reference_point(static_cast<Eigen::Index>(i)) = need_number(ref[i], child(rp, i));
  return w;
}

json vector_json(const numjet::Vector& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

}  // namespace

std::pair<std::string, double> parse_tolerance_flag(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--tol", "expected NAME=VAL, got '" + text + "'");
  const std::string name = text.substr(0, eq), val = text.substr(eq + 1);
  double v = 0.0;
  const auto r = std::from_chars(val.data(), val.data() + val.size(), v);
  if (r.ec != std::errc() || r.ptr != val.data() + val.size() || !(v > 0.0)) {
    throw ConfigError("--tol", "tolerance for '" + name + "' must be a positive number");
  }
  return {name, v};
}

RunConfig parse_config(const json& j, const Overrides& overrides) {
  allow_keys(j, "", {"catalog", "ambient", "immersion", "split", "warp", "samples", "seed", "threads", "tolerances", "suites"});
  RunConfig cfg;

  std::optional<immersion::CatalogEntry> entry;
  if (j.contains("catalog")) {
    const std::string name = need_string(j["catalog"], "/catalog");
    try {
      entry = immersion::catalog(name);
    } catch (const GeometryError& e) {
      fail("/catalog", e.what());
    }
    cfg.catalog_name = name;
    cfg.ambient_name = entry->ambient.name();
    cfg.ambient_n = entry->ambient.n();
    cfg.im = entry->immersion;
    cfg.split = entry->split;
    cfg.warp = entry->warp;
  }

  if (j.contains("immersion")) {
    cfg.im = parse_immersion(j["immersion"], "/immersion");
  } else if (!entry) {
    fail("/immersion", "either 'catalog' or 'immersion' is required");
  }

  if (j.contains("ambient")) {
    const json& a = j["ambient"];
    if (a.is_string()) {
      cfg.ambient_name = a.get<std::string>();
      cfg.ambient_n = (cfg.im.ambient_dim() - 1) / 2;
    } else {
      allow_keys(a, "/ambient", {"name", "n"});
      if (!a.contains("name")) fail("/ambient/name", "missing required key");
      cfg.ambient_name = need_string(a["name"], "/ambient/name");
      cfg.ambient_n = a.contains("n") ? static_cast<int>(need_integer(a["n"], "/ambient/n"))
                                      : (cfg.im.ambient_dim() - 1) / 2;
    }
  } else if (!entry) {
    fail("/ambient", "missing required key");
  }
  if (cfg.ambient_name != "euclidean_acm" && cfg.ambient_name != "standard_sasakian") {
    fail("/ambient", "unknown ambient structure '" + cfg.ambient_name + "' (euclidean_acm, standard_sasakian)");
  }
  if (cfg.ambient_n < 1) fail("/ambient/n", "n must be >= 1");
  if (cfg.im.ambient_dim() != 2 * cfg.ambient_n + 1) {
    fail(j.contains("immersion") ? "/immersion/components" : "/ambient",
         "immersion has " + std::to_string(cfg.im.ambient_dim()) + " components, ambient dimension is " +
             std::to_string(2 * cfg.ambient_n + 1));
  }

  if (j.contains("split")) cfg.split = parse_split(j["split"], "/split", cfg.im);
  if (j.contains("warp")) {
    cfg.warp = parse_warp(j["warp"], "/warp", cfg.im);
    try {
      warped::validate_declaration({cfg.im, cfg.make_ambient(), *cfg.warp});
    } catch (const WarpError& e) {
      fail("/warp", e.what());
    }
  }
  if (j.contains("immersion") && entry && !j.contains("split")) cfg.split.reset();
  if (j.contains("immersion") && entry && !j.contains("warp")) cfg.warp.reset();

  if (j.contains("samples")) {
    const long long n = need_integer(j["samples"], "/samples");
    if (n < 1 || n > 1000000) fail("/samples", "samples must be between 1 and 1000000");
    cfg.samples = static_cast<int>(n);
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !(j["seed"].is_number_integer() && j["seed"].get<long long>() >= 0)) {
      fail("/seed", "seed must be a non-negative integer");
    }
    cfg.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("threads")) {
    const long long t = need_integer(j["threads"], "/threads");
    if (t < 1 || t > 256) fail("/threads", "threads must be between 1 and 256");
    cfg.threads = static_cast<int>(t);
  }
  if (j.contains("tolerances")) {
    if (!j["tolerances"].is_object()) fail("/tolerances", "expected an object");
    for (const auto& [name, v] : j["tolerances"].items()) {
      const double x = need_number(v, child("/tolerances", name));
      if (!(x > 0.0)) fail(child("/tolerances", name), "tolerance must be positive");
      cfg.tolerances.set(name, x);
    }
  }

  std::vector<std::string> suites;
  std::string suites_ptr = "/suites";
  if (!overrides.suites.empty()) {
    suites = overrides.suites;
    suites_ptr = "--suite";
  } else if (j.contains("suites")) {
    for (std::size_t i = 0; i < need_array(j["suites"], "/suites").size(); ++i) {
      suites.push_back(need_string(j["suites"][i], child("/suites", i)));
    }
  } else {
    suites.push_back("structure");
    if (cfg.split) suites.insert(suites.end(), {"tangency", "semislant"});
    if (cfg.warp) suites.push_back("warped");
    if (cfg.split && cfg.warp) suites.push_back("lemmas");
  }
  std::set<std::string> seen;
  for (std::size_t i = 0; i < suites.size(); ++i) {
    const std::string& s = suites[i];
    const std::string sp = suites_ptr == "--suite" ? suites_ptr : child(suites_ptr, i);
    if (std::find(kSuiteNames.begin(), kSuiteNames.end(), s) == kSuiteNames.end()) fail(sp, "unknown suite '" + s + "'");
    if (!seen.insert(s).second) fail(sp, "duplicate suite '" + s + "'");
    const bool need_split = s == "tangency" || s == "semislant" || s == "lemmas";
    const bool need_warp = s == "warped" || s == "lemmas";
    if (need_split && !cfg.split) fail(sp, "suite '" + s + "' requires a split");
    if (need_warp && !cfg.warp) fail(sp, "suite '" + s + "' requires a warp declaration");
    if (s == "lemmas" && cfg.split->Dtheta.empty()) fail(sp, "suite 'lemmas' requires a non-empty Dtheta");
  }
  // Canonical order keeps reports independent of how suites were listed.
  for (const auto& s : kSuiteNames)
    if (seen.count(s)) cfg.suites.push_back(s);

  if (overrides.samples) {
    if (*overrides.samples < 1) fail("--samples", "samples must be >= 1");
    cfg.samples = *overrides.samples;
  }
  if (overrides.seed) cfg.seed = *overrides.seed;
  if (overrides.threads) {
    if (*overrides.threads < 1) fail("--threads", "threads must be >= 1");
    cfg.threads = *overrides.threads;
  }
  for (const auto& [name, v] : overrides.tolerances) cfg.tolerances.set(name, v);
  return cfg;
}

json RunConfig::echo() const {
  json j;
  if (catalog_name) j["catalog"] = *catalog_name;
  j["ambient"] = {{"name", ambient_name}, {"n", ambient_n}};
  json dom = json::array();
  for (const auto& iv : im.domain()) dom.push_back({iv.lo, iv.hi});
  j["immersion"] = {{"variables", im.variables()},
                    {"components", im.component_text()},
                    {"domain", dom},
                    {"exclusions", im.exclusion_text()}};
  if (split) {
    json d = json::array(), dt = json::array();
    for (const auto& v : split->D) d.push_back(vector_json(v));
    for (const auto& v : split->Dtheta) dt.push_back(vector_json(v));
    j["split"] = {{"D", d}, {"Dtheta", dt}};
    if (split->xi) j["split"]["xi"] = vector_json(*split->xi);
  }
  if (warp) {
    j["warp"] = {{"base_vars", warp->base_vars},
                 {"fiber_vars", warp->fiber_vars},
                 {"reference_point", vector_json(warp->reference_point)}};
  }
  j["samples"] = samples;
  j["seed"] = seed;
  j["suites"] = suites;
  j["tolerances"] = tolerances.table();
  return j;
}

}  // namespace contactlab::cli
