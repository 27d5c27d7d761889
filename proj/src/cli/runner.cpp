#include "contactlab/cli/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <map>
#include <optional>
#include <random>
#include <thread>

#include "contactlab/error.hpp"
#include "contactlab/semislant.hpp"
#include "contactlab/tangency.hpp"
#include "contactlab/warped.hpp"

namespace contactlab::cli {

using nlohmann::json;
using numjet::Matrix;
using numjet::Vector;
using numjet::VectorList;

namespace {

struct KeySpec {
  std::string key;
  std::string category;  // structural, second_order, angle, chain, info
};

// Per-point output of one suite: values keyed by residual name, an optional
// metadata object, and the failure message if the suite threw.
struct SuiteRecord {
  json values = json::object();
  json meta;
  std::string error;
};

struct PointResult {
  std::string frame_error;
  double jac_condition = 0;  // smallest / largest singular value of J
  std::optional<double> signed_cos;
  std::optional<semislant::SplitResiduals> split;
  std::map<std::string, SuiteRecord> suites;
};

void put(json& values, const std::string& key, double v) {
  if (std::isfinite(v)) {
    values[key] = v;
  } else {
    values[key] = "refused: undefined value";
  }
}

void refuse(json& values, const std::string& key, const std::string& why) { values[key] = "refused: " + why; }

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

bool has_suite(const RunConfig& cfg, const std::string& s) {
  return std::find(cfg.suites.begin(), cfg.suites.end(), s) != cfg.suites.end();
}

std::vector<KeySpec> suite_keys(const std::string& suite, const RunConfig& cfg) {
  const bool sasakian = cfg.make_ambient().sasakian_model();
  if (suite == "structure") {
    return {{"almost_contact", "structural"},   {"sasakian", sasakian ? "structural" : "info"},
            {"christoffel_symmetry", "structural"}, {"pf_reconstruction", "structural"},
            {"tf_reconstruction", "structural"}, {"adjointness", "structural"},
            {"gauss", "structural"},            {"h_symmetry", "second_order"},
            {"weingarten", "second_order"},     {"shape_self_adjoint", "second_order"},
            {"xi_normal_part", "info"}};
  }
  if (suite == "tangency") {
    return {{"theta", "info"},          {"signed_cos", "info"},         {"D_theta", "angle"},
            {"D_deviation", "angle"},   {"Dtheta_deviation", "angle"}, {"p_squared", "structural"},
            {"antisymmetry", "structural"}, {"p_norm", "structural"},  {"f_norm", "structural"},
            {"tf", "structural"}};
  }
  if (suite == "semislant") {
    return {{"theta", "info"},           {"orthogonality", "structural"}, {"completeness", "structural"},
            {"d_invariance", "structural"}, {"slant_deviation", "angle"},  {"p_squared", "structural"},
            {"xi_alignment", "structural"}, {"nu_invariance", "structural"}, {"connection_i", "second_order"},
            {"connection_ii", "second_order"}};
  }
  if (suite == "warped") {
    return {{"f", "info"},
            {"lnf_grad_norm", "info"},
            {"offblock", "structural"},
            {"base_dependence", "structural"},
            {"factor_spread", "structural"},
            {"fiber_lnf", "structural"},
            {"xi_lnf", "structural"},
            {"bo_connection", "second_order"},
            {"bo_base_geodesic", "second_order"},
            {"bo_fiber_umbilical", "second_order"}};
  }
  std::vector<KeySpec> keys;
  for (const auto& k : warped::lemma_keys()) {
    std::string cat = "second_order";
    if (k.rfind("chain_", 0) == 0) cat = "chain";
    if (k == "C2_literal") cat = "info";
    keys.push_back({k, cat});
  }
  keys.push_back({"xi_lnf", "structural"});
  keys.push_back({"mixed_tg", "info"});
  return keys;
}

// splitmix64 of (seed, index): picks do not depend on the thread schedule.
std::uint64_t point_seed(std::uint64_t seed, std::size_t i) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(i) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

template <class Fn>
void parallel_for(std::size_t n, int threads, Fn fn) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) fn(i);
  };
  std::vector<std::thread> pool;
  const std::size_t extra = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(threads, 1))) - (n > 0 ? 1 : 0);
  for (std::size_t t = 0; t < extra; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

void structure_suite(const immersion::FramedPoint& fp, const secondform::SecondFormData& sf, json& v) {
  const Matrix& g = fp.metric();
  put(v, "almost_contact", ambient::check_almost_contact(fp.structure).max());
  put(v, "sasakian", semislant::sasakian_defect(fp));
  put(v, "christoffel_symmetry", fp.gamma.symmetry_defect());

  const auto pf = tangency::pf_decompose(fp);
  const auto tf = tangency::tf_decompose(fp);
  const Matrix T = fp.tan_matrix();
  const Matrix N = fp.nor_matrix();
  double pf_rec = 0, tf_rec = 0, adj = 0;
  for (int i = 0; i < fp.k(); ++i) {
    const Vector& e = fp.tan_frame[static_cast<std::size_t>(i)];
    Vector rec = T * pf.P.col(i);
    if (fp.codim() > 0) rec += N * pf.F.col(i);
    pf_rec = std::max(pf_rec, numjet::norm(fp.structure.phi * e - rec, g));
  }
  for (int a = 0; a < fp.codim(); ++a) {
    const Vector& n = fp.nor_frame[static_cast<std::size_t>(a)];
    const Vector rec = T * tf.t.col(a) + N * tf.fOp.col(a);
    tf_rec = std::max(tf_rec, numjet::norm(fp.structure.phi * n - rec, g));
    for (int i = 0; i < fp.k(); ++i) adj = std::max(adj, std::abs(pf.F(a, i) + tf.t(i, a)));
  }
  put(v, "pf_reconstruction", pf_rec);
  put(v, "tf_reconstruction", tf_rec);
  put(v, "adjointness", adj);

  put(v, "gauss", sf.gauss_defect);
  put(v, "h_symmetry", sf.symmetry_defect());
  double wein = 0, self_adj = 0;
  for (const Vector& n : fp.nor_frame) {
    const auto s = secondform::shape_operator(sf, fp, n);
    wein = std::max(wein, s.weingarten);
    self_adj = std::max(self_adj, s.self_adjoint);
  }
  put(v, "weingarten", wein);
  put(v, "shape_self_adjoint", self_adj);
  put(v, "xi_normal_part", immersion::xi_tangency(fp).normal_part);
}

// Random unit vector in span(basis) for orthonormal basis.
Vector pick(const VectorList& basis, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v = Vector::Zero(basis.front().size());
  double len2 = 0;
  for (const Vector& b : basis) {
    const double c = gauss(rng);
    v += c * b;
    len2 += c * c;
  }
  return v / std::sqrt(len2);
}

void tangency_suite(const immersion::FramedPoint& fp, const semislant::DistributionSplit& sp, const RunConfig& cfg,
                    std::uint64_t seed, json& v) {
  const Matrix& g = fp.metric();
  const double angle_tol = cfg.tolerances.get("Dtheta_deviation", "angle");
  const Vector xi_unit = sp.xi_dir / numjet::norm(sp.xi_dir, g);
  std::mt19937_64 rng(seed);

  tangency::IdentityResiduals worst;
  auto absorb = [&](const tangency::IdentityResiduals& r) {
    worst.antisymmetry = std::max(worst.antisymmetry, std::abs(r.antisymmetry));
    worst.p_norm = std::max(worst.p_norm, std::abs(r.p_norm));
    worst.f_norm = std::max(worst.f_norm, std::abs(r.f_norm));
    worst.tf = std::max(worst.tf, std::abs(r.tf));
  };
  bool slant_ok = true;
  constexpr int kPicks = 10;

  if (sp.m1() > 0) {
    const auto rep = tangency::slant_function(fp, sp.D, angle_tol);
    put(v, "D_theta", rep.theta);
    put(v, "D_deviation", rep.max_deviation);
    VectorList basis = numjet::orthonormalize(sp.D, g).basis;
    basis.push_back(xi_unit);
    for (int i = 0; i < kPicks; ++i) absorb(tangency::identity_residuals(fp, pick(basis, rng), pick(basis, rng), 0.0));
  } else {
    refuse(v, "D_theta", "empty D");
    refuse(v, "D_deviation", "empty D");
  }

  if (sp.m2() > 0) {
    const auto rep = tangency::slant_function(fp, sp.Dtheta, angle_tol);
    put(v, "theta", rep.theta);
    put(v, "Dtheta_deviation", rep.max_deviation);
    put(v, "p_squared", rep.p_squared_residual);
    if (sp.m2() % 2 == 0) {
      put(v, "signed_cos", tangency::signed_slant_cosine(fp, sp.Dtheta));
    } else {
      refuse(v, "signed_cos", "odd-dimensional Dtheta");
    }
    slant_ok = rep.max_deviation <= angle_tol;
    if (slant_ok) {
      VectorList basis = numjet::orthonormalize(sp.Dtheta, g).basis;
      basis.push_back(xi_unit);
      for (int i = 0; i < kPicks; ++i) {
        absorb(tangency::identity_residuals(fp, pick(basis, rng), pick(basis, rng), rep.theta));
      }
    }
  } else {
    for (const char* k : {"theta", "Dtheta_deviation", "p_squared", "signed_cos"}) refuse(v, k, "empty Dtheta");
  }

  put(v, "antisymmetry", worst.antisymmetry);
  if (slant_ok) {
    put(v, "p_norm", worst.p_norm);
    put(v, "f_norm", worst.f_norm);
    put(v, "tf", worst.tf);
  } else {
    for (const char* k : {"p_norm", "f_norm", "tf"}) refuse(v, k, "Dtheta not pointwise slant");
  }
}

void semislant_suite(const immersion::FramedPoint& fp, const secondform::SecondFormData& sf,
                     const semislant::DistributionSplit& sp, const semislant::SplitResiduals& r, json& v) {
  put(v, "theta", r.theta);
  put(v, "orthogonality", r.orthogonality);
  put(v, "completeness", r.completeness);
  put(v, "d_invariance", r.d_invariance);
  put(v, "slant_deviation", r.slant_deviation);
  put(v, "p_squared", r.p_squared);
  put(v, "xi_alignment", r.xi_alignment);
  put(v, "nu_invariance", semislant::normal_split(fp, sp).nu_invariance);

  if (sp.m2() == 0) {
    refuse(v, "connection_i", "empty Dtheta");
    refuse(v, "connection_ii", "empty Dtheta");
    return;
  }
  if (semislant::sasakian_defect(fp) > 1e-8) {
    refuse(v, "connection_i", "non-Sasakian ambient");
    refuse(v, "connection_ii", "non-Sasakian ambient");
    return;
  }
  const Matrix& g = fp.metric();
  VectorList base = numjet::orthonormalize(sp.D, g).basis;
  base.push_back(sp.xi_dir / numjet::norm(sp.xi_dir, g));
  const VectorList fiber = numjet::orthonormalize(sp.Dtheta, g).basis;
  double first = 0, second = 0;
  for (const Vector& x : base)
    for (const Vector& y : base)
      for (const Vector& z : fiber)
        for (const Vector& w : fiber) {
          const auto l = semislant::lemma1_residuals(fp, sf, r.theta, x, y, z, w);
          first = std::max(first, std::abs(l.first));
          second = std::max(second, std::abs(l.second));
        }
  put(v, "connection_i", first);
  put(v, "connection_ii", second);
}

void warped_suite(const warped::WarpedCandidate& c, const immersion::FramedPoint& fp,
                  const secondform::SecondFormData& sf, json& v) {
  warped::WarpPoint wp;
  wp.fp = fp;
  wp.sf = sf;
  wp.warp = warped::warp_sample(c, fp);
  const auto& s = wp.warp;
  put(v, "f", s.f);
  put(v, "lnf_grad_norm", std::sqrt(s.lnf_grad.dot(fp.induced_metric.llt().solve(s.lnf_grad))));
  put(v, "offblock", s.offblock);
  put(v, "base_dependence", s.base_dependence);
  put(v, "factor_spread", s.factor_spread);
  put(v, "fiber_lnf", s.fiber_lnf);
  put(v, "xi_lnf", std::abs(wp.d_lnf(fp.tangent_part(fp.structure.xi))));
  const auto bo = warped::bishop_oneill_check(c, wp);
  put(v, "bo_connection", bo.connection);
  put(v, "bo_base_geodesic", bo.base_geodesic);
  put(v, "bo_fiber_umbilical", bo.fiber_umbilical);
}

void lemma_suite(const warped::WarpedCandidate& c, const immersion::DomainSplit& split, const Vector& p, SuiteRecord& rec) {
  const warped::WarpPoint wp = warped::prepare_point(c, split, p);
  const warped::LemmaReport rep = warped::lemma_suite(c, wp);
  json& v = rec.values;
  for (const auto& [key, val] : rep.values) {
    if (val.ok()) {
      put(v, key, std::abs(val.value));
    } else {
      refuse(v, key, val.refused);
    }
  }
  put(v, "xi_lnf", std::abs(rep.xi_lnf));
  if (wp.split.m1() > 0) {
    put(v, "mixed_tg", secondform::mixed_tg_test(wp.sf, wp.fp, wp.split.D, wp.split.Dtheta));
  } else {
    refuse(v, "mixed_tg", "empty D");
  }
  json x_theta = json::array();
  for (double t : rep.x_theta) x_theta.push_back(finite_or_null(t));
  rec.meta = {{"theta", rep.theta},
              {"x_lnf", rep.x_lnf},
              {"x_theta", x_theta},
              {"x_theta_flagged", rep.x_theta_flagged}};
}

PointResult evaluate_point(const RunConfig& cfg, const ambient::AmbientStructure& amb, const Vector& p,
                           std::uint64_t seed) {
  PointResult out;
  immersion::FramedPoint fp;
  try {
    fp = immersion::frame_at(cfg.im, amb, p);
  } catch (const Error& e) {
    out.frame_error = e.what();
    return out;
  }
  const Eigen::JacobiSVD<Matrix> svd(fp.jac);
  const auto& sv = svd.singularValues();
  out.jac_condition = sv(sv.size() - 1) / sv(0);

  std::optional<semislant::DistributionSplit> sp;
  if (cfg.split) {
    try {
      sp = semislant::resolve_split(fp, *cfg.split);
      if (sp->m2() > 0 && sp->m2() % 2 == 0) out.signed_cos = tangency::signed_slant_cosine(fp, sp->Dtheta);
      if (has_suite(cfg, "tangency") || has_suite(cfg, "semislant")) out.split = semislant::verify_split(fp, *sp);
    } catch (const Error& e) {
      for (const char* s : {"tangency", "semislant"}) out.suites[s].error = e.what();
      sp.reset();
    }
  }

  std::optional<secondform::SecondFormData> sf;
  auto second = [&]() -> const secondform::SecondFormData& {
    if (!sf) sf = secondform::second_form(fp);
    return *sf;
  };

  for (const std::string& suite : cfg.suites) {
    SuiteRecord& rec = out.suites[suite];
    if (!rec.error.empty()) continue;
    try {
      if (suite == "structure") {
        structure_suite(fp, second(), rec.values);
      } else if (suite == "tangency") {
        tangency_suite(fp, *sp, cfg, seed, rec.values);
      } else if (suite == "semislant") {
        semislant_suite(fp, second(), *sp, *out.split, rec.values);
      } else if (suite == "warped") {
        warped_suite({cfg.im, amb, *cfg.warp}, fp, second(), rec.values);
      } else if (suite == "lemmas") {
        lemma_suite({cfg.im, amb, *cfg.warp}, *cfg.split, p, rec);
      }
    } catch (const Error& e) {
      rec.values = json::object();
      rec.error = e.what();
    }
  }
  return out;
}

// Undeclared singular loci: a failed frame, a nearly rank-deficient Jacobian,
// or a slant cosine that changes sign between samples (theta crosses pi/2).
void require_exclusions(const RunConfig& cfg, const std::vector<PointResult>& results) {
  if (!cfg.im.exclusions().empty()) return;
  const std::string ptr = "/immersion/exclusions";
  bool pos = false, neg = false;
  for (const auto& r : results) {
    if (!r.frame_error.empty()) throw ConfigError(ptr, "excluded-point predicate required (" + r.frame_error + ")");
    if (r.jac_condition < 1e-6) throw ConfigError(ptr, "excluded-point predicate required (near rank-deficient Jacobian)");
    if (r.signed_cos) {
      pos = pos || *r.signed_cos > 1e-6;
      neg = neg || *r.signed_cos < -1e-6;
    }
  }
  if (pos && neg) {
    throw ConfigError(ptr, "excluded-point predicate required (slant cosine changes sign inside the sample box)");
  }
}

json aggregate(const std::string& suite, const RunConfig& cfg, const std::vector<PointResult>& results,
               std::vector<std::string>& violations) {
  json out;
  json records = json::array();
  json errors = json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto it = results[i].suites.find(suite);
    json rec = {{"point", i}};
    if (it == results[i].suites.end()) {
      rec["error"] = results[i].frame_error;
      errors.push_back(rec);
      records.push_back(rec);
      continue;
    }
    if (!it->second.error.empty()) {
      rec["error"] = it->second.error;
      errors.push_back(rec);
    }
    rec["values"] = it->second.values;
    if (!it->second.meta.is_null()) rec["meta"] = it->second.meta;
    records.push_back(rec);
  }

  json keys = json::object();
  bool pass = errors.empty();
  for (const auto& spec : suite_keys(suite, cfg)) {
    double mx = 0, sum = 0;
    int evaluated = 0, refused = 0;
    for (const auto& rec : records) {
      if (!rec.contains("values") || !rec["values"].contains(spec.key)) continue;
      const json& v = rec["values"][spec.key];
      if (v.is_number()) {
        const double a = std::abs(v.get<double>());
        mx = std::max(mx, a);
        sum += a;
        ++evaluated;
      } else {
        ++refused;
      }
    }
    json k = {{"category", spec.category}, {"evaluated", evaluated}, {"refused", refused}};
    if (evaluated > 0) {
      k["max"] = mx;
      k["mean"] = sum / evaluated;
    }
    std::string verdict;
    if (spec.category == "info") {
      verdict = "info";
    } else {
      const double tol = cfg.tolerances.get(spec.key, spec.category);
      k["tolerance"] = tol;
      if (evaluated == 0) {
        verdict = "refused";
      } else if (mx <= tol) {
        verdict = "pass";
      } else {
        verdict = "fail";
        pass = false;
        violations.push_back(suite + "/" + spec.key);
      }
    }
    k["verdict"] = verdict;
    keys[spec.key] = k;
  }
  if (!errors.empty()) violations.push_back(suite + "/errors");
  out["keys"] = keys;
  out["records"] = records;
  out["errors"] = errors;
  out["verdict"] = pass ? "pass" : "fail";
  return out;
}

json classification(const RunConfig& cfg, const std::vector<PointResult>& results) {
  std::vector<semislant::SplitResiduals> rs;
  for (const auto& r : results)
    if (r.split) rs.push_back(*r.split);
  if (rs.empty()) return nullptr;
  const double tol = cfg.tolerances.get("theta_constancy", "angle");
  double mean = 0, lo = rs.front().theta, hi = rs.front().theta;
  for (const auto& r : rs) {
    mean += r.theta;
    lo = std::min(lo, r.theta);
    hi = std::max(hi, r.theta);
  }
  mean /= static_cast<double>(rs.size());
  double var = 0;
  for (const auto& r : rs) var += (r.theta - mean) * (r.theta - mean);
  const double stddev = std::sqrt(var / static_cast<double>(rs.size()));
  return {{"label", semislant::classify(rs, tol)},
          {"m1", rs.front().m1},
          {"m2", rs.front().m2},
          {"theta_mean", mean},
          {"theta_min", lo},
          {"theta_max", hi},
          {"theta_stddev", stddev},
          {"theta_constant", stddev < tol}};
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

RunResult run(const RunConfig& cfg) {
  const ambient::AmbientStructure amb = cfg.make_ambient();
  std::vector<Vector> points;
  try {
    points = immersion::sample_points(cfg.im, cfg.samples, cfg.seed);
  } catch (const GeometryError& e) {
    throw ConfigError("/immersion/domain", e.what());
  }

  std::vector<PointResult> results(points.size());
  parallel_for(points.size(), cfg.threads, [&](std::size_t i) {
    results[i] = evaluate_point(cfg, amb, points[i], point_seed(cfg.seed, i));
  });
  require_exclusions(cfg, results);

  json report;
  report["engine_version"] = kEngineVersion;
  report["timestamp"] = utc_timestamp();
  report["config"] = cfg.echo();
  json pts = json::array();
  for (const Vector& p : points) pts.push_back(std::vector<double>(p.data(), p.data() + p.size()));
  report["points"] = pts;

  std::vector<std::string> violations;
  json suites = json::object();
  for (const auto& s : cfg.suites) suites[s] = aggregate(s, cfg, results, violations);
  if (has_suite(cfg, "warped")) {
    double g = 0;
    for (const auto& rec : suites["warped"]["records"])
      if (rec.contains("values") && rec["values"]["lnf_grad_norm"].is_number())
        g = std::max(g, rec["values"]["lnf_grad_norm"].get<double>());
    suites["warped"]["trivial"] = g < 1e-8;
  }
  report["suites"] = suites;
  report["classification"] = classification(cfg, results);
  report["violations"] = violations;
  report["status"] = violations.empty() ? "pass" : "fail";
  return {report, violations.empty() ? 0 : 1};
}

json without_timestamp(json report) {
  report.erase("timestamp");
  return report;
}

}  // namespace contactlab::cli
