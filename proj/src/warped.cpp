#include "contactlab/warped.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "contactlab/error.hpp"
#include "contactlab/tangency.hpp"

namespace contactlab::warped {

using numjet::inner;
using numjet::norm;

namespace {

constexpr double kDegenerate = 1e-6;
const char* const kDegenerateTheta = "degenerate θ";

Matrix block(const Matrix& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c)
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m(rows[r], cols[c]);
  return out;
}

// tr(G_F^-1 dG_F) / (2 m2): the derivative of ln f when G_F = f^2 G_2.
double log_factor_derivative(const FramedPoint& fp, const std::vector<int>& fiber, int direction) {
  const Matrix gf = block(fp.induced_metric, fiber, fiber);
  const Matrix dgf = block(immersion::induced_metric_derivative(fp, Vector::Unit(fp.k(), direction)), fiber, fiber);
  return gf.llt().solve(dgf).trace() / (2.0 * static_cast<double>(fiber.size()));
}

VectorList coordinate_vectors(const FramedPoint& fp, const std::vector<int>& idx) {
  VectorList out;
  for (int i : idx) out.push_back(fp.jac.col(i));
  return out;
}

}  // namespace

void validate_declaration(const WarpedCandidate& c) {
  const int k = c.im.k();
  std::vector<int> seen(static_cast<std::size_t>(k), 0);
  for (const auto* group : {&c.decl.base_vars, &c.decl.fiber_vars}) {
    for (int i : *group) {
      if (i < 0 || i >= k) throw WarpError("warp declaration: variable index out of range");
      if (seen[static_cast<std::size_t>(i)]++) throw WarpError("warp declaration: base and fiber overlap");
    }
  }
  if (std::count(seen.begin(), seen.end(), 0) != 0) throw WarpError("warp declaration does not cover every variable");
  if (c.decl.fiber_vars.empty() || c.decl.base_vars.empty()) throw WarpError("warp declaration: empty base or fiber");
  if (c.decl.reference_point.size() != static_cast<Eigen::Index>(c.decl.base_vars.size())) {
    throw WarpError("warp declaration: reference point needs one value per base variable");
  }
}

WarpSample warp_sample(const WarpedCandidate& c, const FramedPoint& fp) {
  const auto& base = c.decl.base_vars;
  const auto& fiber = c.decl.fiber_vars;
  const Matrix& G = fp.induced_metric;
  WarpSample s;
  s.p = fp.p;
  s.lnf_grad = Vector::Zero(fp.k());

  for (int a : base)
    for (int b : fiber) s.offblock = std::max(s.offblock, std::abs(G(a, b)) / std::sqrt(G(a, a) * G(b, b)));

  const double base_scale = std::max(block(G, base, base).cwiseAbs().maxCoeff(), 1e-300);
  for (int cdir : fiber) {
    const Matrix dG = immersion::induced_metric_derivative(fp, Vector::Unit(fp.k(), cdir));
    s.base_dependence = std::max(s.base_dependence, block(dG, base, base).cwiseAbs().maxCoeff() / base_scale);
  }

  Vector p0 = fp.p;
  for (std::size_t i = 0; i < base.size(); ++i) p0(base[i]) = c.decl.reference_point(static_cast<Eigen::Index>(i));
  const FramedPoint ref = immersion::frame_at(c.im, c.amb, p0, -1.0);

  const Matrix gf = block(G, fiber, fiber);
  const Matrix gf0 = block(ref.induced_metric, fiber, fiber);
  const double scale0 = gf0.cwiseAbs().maxCoeff();
  double lo = std::numeric_limits<double>::infinity(), hi = -lo, sum = 0.0;
  int count = 0;
  for (Eigen::Index i = 0; i < gf.rows(); ++i) {
    for (Eigen::Index j = i; j < gf.cols(); ++j) {
      if (std::abs(gf0(i, j)) <= 1e-8 * scale0) {
        s.factor_spread = std::max(s.factor_spread, std::abs(gf(i, j)) / std::max(gf.cwiseAbs().maxCoeff(), 1e-300));
        continue;
      }
      const double r = gf(i, j) / gf0(i, j);
      lo = std::min(lo, r);
      hi = std::max(hi, r);
      sum += r;
      ++count;
    }
  }
  if (count == 0 || !(lo > 0)) throw WarpError("fiber block does not factor through a positive warping function");
  const double mean = sum / count;
  s.factor_spread = std::max(s.factor_spread, (hi - lo) / mean);
  s.f = std::sqrt(mean);

  for (int a : base) s.lnf_grad(a) = log_factor_derivative(fp, fiber, a);
  for (int b : fiber) {
    s.lnf_grad(b) = log_factor_derivative(fp, fiber, b) - log_factor_derivative(ref, fiber, b);
    s.fiber_lnf = std::max(s.fiber_lnf, std::abs(s.lnf_grad(b)));
  }
  return s;
}

WarpReport detect_warp(const WarpedCandidate& c, const std::vector<Vector>& points, double tol) {
  validate_declaration(c);
  WarpReport r;
  for (const Vector& p : points) {
    const FramedPoint fp = immersion::frame_at(c.im, c.amb, p);
    WarpSample s = warp_sample(c, fp);
    r.max_offblock = std::max(r.max_offblock, s.offblock);
    r.max_base_dependence = std::max(r.max_base_dependence, s.base_dependence);
    r.max_factor_spread = std::max(r.max_factor_spread, s.factor_spread);
    r.max_fiber_lnf = std::max(r.max_fiber_lnf, s.fiber_lnf);
    r.max_grad = std::max(r.max_grad, std::sqrt(s.lnf_grad.dot(fp.induced_metric.llt().solve(s.lnf_grad))));
    r.samples.push_back(std::move(s));
  }
  if (r.max_offblock > tol) {
    throw WarpError("block structure violated: base/fiber metric coupling " + std::to_string(r.max_offblock));
  }
  if (r.max_base_dependence > tol || r.max_factor_spread > tol || r.max_fiber_lnf > tol) {
    throw WarpError("inconsistent factorization (not a warped metric)");
  }
  r.trivial = r.max_grad < 1e-8;
  return r;
}

double WarpPoint::d_lnf(const Vector& x) const { return fp.domain_coords(x).dot(warp.lnf_grad); }

Vector WarpPoint::grad_lnf() const { return fp.jac * fp.induced_metric.llt().solve(warp.lnf_grad); }

WarpPoint prepare_point(const WarpedCandidate& c, const immersion::DomainSplit& split, const Vector& p) {
  if (split.Dtheta.empty()) throw WarpError("warped identities need a non-empty D^theta");
  WarpPoint wp;
  wp.fp = immersion::frame_at(c.im, c.amb, p);
  wp.sf = secondform::second_form(wp.fp);
  wp.warp = warp_sample(c, wp.fp);
  wp.split = semislant::resolve_split(wp.fp, split);
  const Matrix& g = wp.fp.metric();
  wp.base_frame = numjet::orthonormalize(wp.split.D, g).basis;
  wp.base_frame.push_back(wp.split.xi_dir / norm(wp.split.xi_dir, g));
  wp.fiber_frame = numjet::orthonormalize(wp.split.Dtheta, g).basis;
  wp.fiber_domain = split.Dtheta.front();
  wp.theta = tangency::slant_function(wp.fp, wp.split.Dtheta).theta;
  wp.sasakian = semislant::sasakian_defect(wp.fp);

  const VectorList fiber_coords = numjet::orthonormalize(coordinate_vectors(wp.fp, c.decl.fiber_vars), g).basis;
  const Vector xi_unit = wp.fp.structure.xi / norm(wp.fp.structure.xi, g);
  wp.xi_in_fiber = norm(numjet::project_onto(xi_unit, fiber_coords, g), g);
  return wp;
}

BishopONeill bishop_oneill_check(const WarpedCandidate& c, const WarpPoint& wp) {
  const FramedPoint& fp = wp.fp;
  const Matrix& g = fp.metric();
  const VectorList base = numjet::orthonormalize(coordinate_vectors(fp, c.decl.base_vars), g).basis;
  const VectorList fiber = numjet::orthonormalize(coordinate_vectors(fp, c.decl.fiber_vars), g).basis;
  const Vector grad = wp.grad_lnf();
  auto len = [&](int i) { return norm(fp.jac.col(i), g); };

  BishopONeill r;
  for (int a : c.decl.base_vars) {
    for (int b : c.decl.fiber_vars) {
      const Vector res = wp.sf.nabla_at(a, b) - wp.warp.lnf_grad(a) * fp.jac.col(b);
      r.connection = std::max(r.connection, norm(res, g) / (len(a) * len(b)));
    }
    for (int a2 : c.decl.base_vars) {
      const Vector along_fiber = numjet::project_onto(wp.sf.nabla_at(a, a2), fiber, g);
      r.base_geodesic = std::max(r.base_geodesic, norm(along_fiber, g) / (len(a) * len(a2)));
    }
  }
  for (int b : c.decl.fiber_vars) {
    for (int b2 : c.decl.fiber_vars) {
      const Vector hb = numjet::project_onto(wp.sf.nabla_at(b, b2), base, g);
      const Vector res = hb + fp.induced_metric(b, b2) * numjet::project_onto(grad, base, g);
      r.fiber_umbilical = std::max(r.fiber_umbilical, norm(res, g) / (len(b) * len(b2)));
    }
  }
  return r;
}

double bishop_oneill_residual(const WarpPoint& wp, const Vector& x, const Vector& z) {
  const Matrix& g = wp.fp.metric();
  const Vector res = secondform::nabla_of(wp.sf, wp.fp, x, z) - wp.d_lnf(x) * z;
  return norm(res, g) / (norm(x, g) * norm(z, g));
}

const std::vector<std::string>& lemma_keys() {
  static const std::vector<std::string> keys = {"L2", "L3i", "L3ii", "L3iii", "L4",         "L5",       "L6",      "L7",
                                                "L8", "L10", "T4",   "T5",    "C2", "C2_literal", "chain_L7", "chain_L8"};
  return keys;
}

namespace {

bool proper(double theta) { return std::sin(theta) >= kDegenerate && std::cos(theta) >= kDegenerate; }

std::string precondition_failure(const WarpPoint& wp) {
  if (wp.sasakian > 1e-8) return "non-Sasakian ambient";
  if (wp.xi_in_fiber > 1e-8) return "xi not tangent to the base";
  return {};
}

}  // namespace

LemmaValue theorem4_check(const WarpedCandidate& c, const WarpPoint& wp, const Vector& x) {
  if (auto why = precondition_failure(wp); !why.empty()) return LemmaValue::refuse(why);
  if (!proper(wp.theta)) return LemmaValue::refuse(kDegenerateTheta);
  const auto xt = tangency::slant_derivative(c.im, c.amb, wp.fp, wp.fiber_domain, wp.fp.domain_coords(x));
  return LemmaValue::of(std::abs(wp.d_lnf(x) - std::tan(wp.theta) * xt.exact));
}

LemmaValue theorem5_forward(const WarpPoint& wp, const Vector& x, const Vector& w) {
  if (auto why = precondition_failure(wp); !why.empty()) return LemmaValue::refuse(why);
  if (std::sin(wp.theta) < kDegenerate) return LemmaValue::refuse(kDegenerateTheta);
  using tangency::F_of;
  using tangency::P_of;
  const FramedPoint& fp = wp.fp;
  const Matrix& g = fp.metric();
  const double s2 = std::pow(std::sin(wp.theta), 2);
  const auto a_fw = secondform::shape_operator(wp.sf, fp, F_of(fp, w));
  const auto a_fpw = secondform::shape_operator(wp.sf, fp, F_of(fp, P_of(fp, w)));
  const Vector res = a_fw.apply(fp, P_of(fp, x)) - a_fpw.apply(fp, x) - s2 * wp.d_lnf(x) * w;
  double z_lnf = 0.0;
  for (const Vector& z : wp.fiber_frame) z_lnf = std::max(z_lnf, std::abs(wp.d_lnf(z)));
  return LemmaValue::of(std::max(norm(res, g), z_lnf));
}

LemmaValue corollary2_check(const WarpPoint& wp, const Vector& x, const Vector& z, bool literal) {
  if (auto why = precondition_failure(wp); !why.empty()) return LemmaValue::refuse(why);
  if (std::cos(wp.theta) >= kDegenerate) return LemmaValue::refuse("θ not π/2");
  const FramedPoint& fp = wp.fp;
  const Matrix& g = fp.metric();
  const auto a = secondform::shape_operator(wp.sf, fp, fp.structure.phi * z);
  const double eta_x = fp.structure.eta.dot(x);
  const double phx_lnf = wp.d_lnf(tangency::P_of(fp, x));
  const double coeff = literal ? eta_x - phx_lnf : -(eta_x + phx_lnf);
  return LemmaValue::of(norm(a.apply(fp, x) - coeff * z, g));
}

LemmaReport lemma_suite(const WarpedCandidate& c, const WarpPoint& wp, const std::vector<std::string>& selectors) {
  using secondform::h_of;
  using tangency::F_of;
  using tangency::P_of;
  const std::set<std::string> wanted =
      selectors.empty() ? std::set<std::string>(lemma_keys().begin(), lemma_keys().end())
                        : std::set<std::string>(selectors.begin(), selectors.end());
  for (const auto& key : wanted) {
    if (std::find(lemma_keys().begin(), lemma_keys().end(), key) == lemma_keys().end()) {
      throw Error("unknown lemma key '" + key + "'");
    }
  }

  const FramedPoint& fp = wp.fp;
  const Matrix& g = fp.metric();
  LemmaReport rep;
  rep.point = fp.p;
  rep.theta = wp.theta;
  rep.xi_lnf = wp.d_lnf(fp.structure.xi);
  for (const Vector& x : wp.base_frame) rep.x_lnf.push_back(wp.d_lnf(x));

  // The chains are arithmetic identities of the engine's own terms, so they
  // are reported even where the geometric preconditions fail.
  const std::string blocked = precondition_failure(wp);
  auto put = [&](const std::string& key, LemmaValue v) {
    if (!wanted.count(key)) return;
    const bool chain = key.rfind("chain_", 0) == 0;
    rep.values[key] = (blocked.empty() || chain) ? std::move(v) : LemmaValue::refuse(blocked);
  };

  const double th = wp.theta;
  const double c2 = std::pow(std::cos(th), 2), s2 = std::pow(std::sin(th), 2), s2t = std::sin(2.0 * th);
  const bool is_proper = proper(th);

  for (const Vector& x : wp.base_frame) {
    if (!is_proper) {
      rep.x_theta.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    const auto xt = tangency::slant_derivative(c.im, c.amb, fp, wp.fiber_domain, fp.domain_coords(x));
    rep.x_theta.push_back(xt.exact);
    rep.x_theta_flagged = rep.x_theta_flagged || xt.flagged;
  }

  double l2 = 0, l3i = 0, l3ii = 0, l3iii = 0, l4 = 0, l5 = 0, l6 = 0, l7 = 0, l8 = 0, l10 = 0;
  double chain7 = 0, chain8 = 0, t4 = 0, t5 = 0, c2v = 0, c2lit = 0;

  for (const Vector& z : wp.fiber_frame) {
    for (const Vector& w : wp.fiber_frame) {
      l3i = std::max(l3i, std::abs(inner(P_of(fp, z), w, g) + rep.xi_lnf * inner(z, w, g)));
    }
  }
  for (const Vector& x : wp.base_frame)
    for (const Vector& y : wp.base_frame)
      for (const Vector& z : wp.fiber_frame) l3ii = std::max(l3ii, std::abs(inner(h_of(wp.sf, fp, x, y), F_of(fp, z), g)));

  for (std::size_t xi = 0; xi < wp.base_frame.size(); ++xi) {
    const Vector& x = wp.base_frame[xi];
    const Vector px = P_of(fp, x);
    const double xl = wp.d_lnf(x), pxl = wp.d_lnf(px), ex = fp.structure.eta.dot(x);
    for (const Vector& z : wp.fiber_frame) {
      const Vector pz = P_of(fp, z), fz = F_of(fp, z), fpz = F_of(fp, pz);
      for (const Vector& w : wp.fiber_frame) {
        const Vector pw = P_of(fp, w), fw = F_of(fp, w), fpw = F_of(fp, pw);
        const double gzw = inner(z, w, g), g_z_pw = inner(z, pw, g), g_pz_w = inner(pz, w, g);

        if (is_proper) {
          const double lhs2 = inner(h_of(wp.sf, fp, x, w), fpz, g) - inner(h_of(wp.sf, fp, x, pz), fw, g);
          l2 = std::max(l2, std::abs(lhs2 - s2t * rep.x_theta[xi] * gzw));
        }
        const double s3iii = inner(h_of(wp.sf, fp, x, z), fw, g) - (xl * g_pz_w - pxl * gzw - ex * gzw);
        const double s4 = inner(h_of(wp.sf, fp, px, z), fw, g) - (xl * gzw - ex * g_z_pw - pxl * g_z_pw);
        const double s5 = inner(h_of(wp.sf, fp, x, pz), fw, g) - (pxl * g_z_pw - ex * g_pz_w - c2 * xl * gzw);
        const double s6 = inner(h_of(wp.sf, fp, x, z), fpw, g) - (c2 * xl * gzw - pxl * g_z_pw - ex * g_z_pw);
        const double s10 = inner(h_of(wp.sf, fp, x, w), fpz, g) - (c2 * xl * gzw + pxl * g_z_pw + ex * g_z_pw);

        const auto a_fw = secondform::shape_operator(wp.sf, fp, fw);
        const auto a_fpw = secondform::shape_operator(wp.sf, fp, fpw);
        const auto a_fpz = secondform::shape_operator(wp.sf, fp, fpz);
        const double s7 = inner(a_fw.apply(fp, px), z, g) - inner(a_fpw.apply(fp, x), z, g) - s2 * xl * gzw;
        const double s8 = inner(a_fpz.apply(fp, w), x, g) - inner(a_fw.apply(fp, pz), x, g) - 2.0 * c2 * xl * gzw;

        l3iii = std::max(l3iii, std::abs(s3iii));
        l4 = std::max(l4, std::abs(s4));
        l5 = std::max(l5, std::abs(s5));
        l6 = std::max(l6, std::abs(s6));
        l7 = std::max(l7, std::abs(s7));
        l8 = std::max(l8, std::abs(s8));
        l10 = std::max(l10, std::abs(s10));
        chain7 = std::max(chain7, std::abs(s7 - (s4 - s6)));
        chain8 = std::max(chain8, std::abs(s8 - (s10 - s5)));
      }
    }
    if (wanted.count("T4") && is_proper) t4 = std::max(t4, theorem4_check(c, wp, x).value);
    if (wanted.count("T5") && std::sin(th) >= kDegenerate)
      for (const Vector& w : wp.fiber_frame) t5 = std::max(t5, theorem5_forward(wp, x, w).value);
    if (std::cos(th) < kDegenerate) {
      for (const Vector& z : wp.fiber_frame) {
        if (wanted.count("C2")) c2v = std::max(c2v, corollary2_check(wp, x, z).value);
        if (wanted.count("C2_literal")) c2lit = std::max(c2lit, corollary2_check(wp, x, z, true).value);
      }
    }
  }

  const LemmaValue degenerate = LemmaValue::refuse(kDegenerateTheta);
  put("L2", is_proper ? LemmaValue::of(l2) : degenerate);
  put("L3i", LemmaValue::of(l3i));
  put("L3ii", LemmaValue::of(l3ii));
  put("L3iii", LemmaValue::of(l3iii));
  put("L4", LemmaValue::of(l4));
  put("L5", LemmaValue::of(l5));
  put("L6", LemmaValue::of(l6));
  put("L7", is_proper ? LemmaValue::of(l7) : degenerate);
  put("L8", is_proper ? LemmaValue::of(l8) : degenerate);
  put("L10", LemmaValue::of(l10));
  put("T4", is_proper ? LemmaValue::of(t4) : degenerate);
  put("T5", std::sin(th) >= kDegenerate ? LemmaValue::of(t5) : degenerate);
  const LemmaValue not_cr = LemmaValue::refuse("θ not π/2");
  put("C2", std::cos(th) < kDegenerate ? LemmaValue::of(c2v) : not_cr);
  put("C2_literal", std::cos(th) < kDegenerate ? LemmaValue::of(c2lit) : not_cr);
  put("chain_L7", LemmaValue::of(chain7));
  put("chain_L8", LemmaValue::of(chain8));
  return rep;
}

}  // namespace contactlab::warped
