#include "contactlab/immersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "contactlab/error.hpp"
#include "contactlab/numjet/jet.hpp"

namespace contactlab::immersion {

Immersion Immersion::from_strings(std::vector<std::string> variables, std::vector<std::string> components,
                                  std::vector<Interval> domain, std::vector<std::string> exclusions) {
  if (variables.empty()) throw GeometryError("immersion has no variables");
  if (domain.size() != variables.size()) throw GeometryError("domain box needs one interval per variable");
  for (const auto& iv : domain) {
    if (!(iv.lo <= iv.hi)) throw GeometryError("domain interval with lo > hi");
  }
  Immersion im;
  im.variables_ = std::move(variables);
  im.component_text_ = std::move(components);
  im.exclusion_text_ = std::move(exclusions);
  im.domain_ = std::move(domain);
  for (const auto& c : im.component_text_) im.components_.push_back(numjet::parse_expr(c, im.variables_));
  for (const auto& c : im.exclusion_text_) im.exclusions_.push_back(numjet::parse_expr(c, im.variables_));
  return im;
}

Vector Immersion::position(const Vector& p) const {
  Vector out(ambient_dim());
  std::span<const double> x(p.data(), static_cast<std::size_t>(p.size()));
  for (int m = 0; m < ambient_dim(); ++m) out(m) = components_[static_cast<std::size_t>(m)].evaluate(x);
  return out;
}

double Immersion::exclusion_distance(const Vector& p) const {
  double d = std::numeric_limits<double>::infinity();
  std::span<const double> x(p.data(), static_cast<std::size_t>(p.size()));
  for (const auto& e : exclusions_) d = std::min(d, std::abs(e.evaluate(x)));
  return d;
}

bool Immersion::in_domain(const Vector& p) const {
  if (p.size() != k()) return false;
  for (int i = 0; i < k(); ++i) {
    if (p(i) < domain_[static_cast<std::size_t>(i)].lo || p(i) > domain_[static_cast<std::size_t>(i)].hi) return false;
  }
  return true;
}

Vector FramedPoint::tan_coords(const Vector& v) const {
  const Vector gv = metric() * v;
  Vector c(k());
  for (int i = 0; i < k(); ++i) c(i) = tan_frame[static_cast<std::size_t>(i)].dot(gv);
  return c;
}

Vector FramedPoint::nor_coords(const Vector& v) const {
  const Vector gv = metric() * v;
  Vector c(codim());
  for (int i = 0; i < codim(); ++i) c(i) = nor_frame[static_cast<std::size_t>(i)].dot(gv);
  return c;
}

Vector FramedPoint::tangent_part(const Vector& v) const { return numjet::project_onto(v, tan_frame, metric()); }
Vector FramedPoint::normal_part(const Vector& v) const { return numjet::project_onto(v, nor_frame, metric()); }
Vector FramedPoint::domain_coords(const Vector& x) const {
  return induced_metric.llt().solve(jac.transpose() * (metric() * x));
}

Matrix FramedPoint::tan_matrix() const { return numjet::stack_columns(tan_frame, dim()); }
Matrix FramedPoint::nor_matrix() const { return numjet::stack_columns(nor_frame, dim()); }

FramedPoint frame_at(const Immersion& im, const ambient::AmbientStructure& amb, const Vector& p,
                     double exclusion_tol) {
  if (im.ambient_dim() != amb.dim()) {
    throw GeometryError("immersion has " + std::to_string(im.ambient_dim()) + " components but the ambient has dimension " +
                        std::to_string(amb.dim()));
  }
  if (p.size() != im.k()) throw GeometryError("domain point has wrong dimension");
  if (im.exclusion_distance(p) <= exclusion_tol) throw GeometryError("excluded point");

  const int d = im.ambient_dim();
  const int k = im.k();
  FramedPoint fp;
  fp.p = p;
  fp.pos.resize(d);
  fp.jac.resize(d, k);
  fp.hess.reserve(static_cast<std::size_t>(d));
  for (int m = 0; m < d; ++m) {
    const numjet::Jet2 j = numjet::eval_jet2(im.components()[static_cast<std::size_t>(m)], p);
    fp.pos(m) = j.value;
    fp.jac.row(m) = j.grad.transpose();
    fp.hess.push_back(j.hess);
  }
  fp.structure = amb.sample(fp.pos);
  fp.gamma = ambient::christoffel(fp.structure);
  const Matrix& g = fp.structure.metric;

  const auto tangent = numjet::orthonormalize(numjet::columns(fp.jac), g);
  if (tangent.rank < k) {
    throw GeometryError("rank-deficient Jacobian (rank " + std::to_string(tangent.rank) + " < " + std::to_string(k) + ")");
  }
  fp.tan_frame = tangent.basis;

  VectorList all = fp.tan_frame;
  for (int i = 0; i < d; ++i) all.push_back(Vector::Unit(d, i));
  auto full = numjet::orthonormalize(all, g);
  if (full.rank != d) throw GeometryError("could not complete the normal frame");
  fp.nor_frame.assign(full.basis.begin() + k, full.basis.end());

  fp.induced_metric = fp.jac.transpose() * g * fp.jac;
  return fp;
}

Matrix induced_metric(const FramedPoint& fp) { return fp.induced_metric; }

Matrix jacobian_derivative(const FramedPoint& fp, const Vector& a) {
  Matrix dJ(fp.dim(), fp.k());
  for (int m = 0; m < fp.dim(); ++m) dJ.row(m) = (fp.hess[static_cast<std::size_t>(m)] * a).transpose();
  return dJ;
}

Matrix phi_derivative(const FramedPoint& fp, const Vector& v) {
  Matrix out = Matrix::Zero(fp.dim(), fp.dim());
  for (int m = 0; m < fp.dim(); ++m) out += v(m) * fp.structure.dphi[static_cast<std::size_t>(m)];
  return out;
}

Matrix metric_derivative(const FramedPoint& fp, const Vector& v) {
  Matrix out = Matrix::Zero(fp.dim(), fp.dim());
  for (int m = 0; m < fp.dim(); ++m) out += v(m) * fp.structure.dmetric[static_cast<std::size_t>(m)];
  return out;
}

Matrix induced_metric_derivative(const FramedPoint& fp, const Vector& a) {
  const Matrix dJ = jacobian_derivative(fp, a);
  const Matrix dg = metric_derivative(fp, fp.jac * a);
  const Matrix& g = fp.metric();
  const Matrix& J = fp.jac;
  return dJ.transpose() * g * J + J.transpose() * dg * J + J.transpose() * g * dJ;
}

XiTangency xi_tangency(const FramedPoint& fp, double tol) {
  XiTangency r;
  const Vector& xi = fp.structure.xi;
  r.tangent_part = numjet::norm(fp.tangent_part(xi), fp.metric());
  r.normal_part = numjet::norm(fp.normal_part(xi), fp.metric());
  if (r.normal_part < tol) {
    r.verdict = "tangent";
  } else if (r.tangent_part < tol) {
    r.verdict = "normal";
  } else {
    r.verdict = "mixed";
  }
  return r;
}

std::vector<Vector> sample_points(const Immersion& im, int count, std::uint64_t seed, double margin) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<Vector> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  const long budget = 1000L * std::max(count, 1);
  long tries = 0;
  while (static_cast<int>(out.size()) < count) {
    if (++tries > budget) throw GeometryError("sampling: the domain box is almost entirely excluded");
    Vector p(im.k());
    for (int i = 0; i < im.k(); ++i) {
      const Interval& iv = im.domain()[static_cast<std::size_t>(i)];
      p(i) = iv.lo + (iv.hi - iv.lo) * unit(rng);
    }
    if (im.exclusion_distance(p) < margin) continue;
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace contactlab::immersion
