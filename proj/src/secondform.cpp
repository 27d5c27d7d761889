#include "contactlab/secondform.hpp"

#include <algorithm>
#include <cmath>

#include "contactlab/error.hpp"

namespace contactlab::secondform {

using numjet::inner;
using numjet::norm;

double SecondFormData::symmetry_defect() const {
  double worst = 0.0;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) worst = std::max(worst, (h_at(i, j) - h_at(j, i)).cwiseAbs().maxCoeff());
  return worst;
}

SecondFormData second_form(const FramedPoint& fp) {
  const int k = fp.k();
  const int d = fp.dim();
  const Matrix& g = fp.metric();
  SecondFormData sf;
  sf.k = k;
  const auto llt = fp.induced_metric.llt();
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      Vector cov(d);
      for (int m = 0; m < d; ++m) cov(m) = fp.hess[static_cast<std::size_t>(m)](i, j);
      cov += fp.gamma.contract(fp.jac.col(i), fp.jac.col(j));

      const Vector coeff = llt.solve(fp.jac.transpose() * (g * cov));
      const Vector tang = fp.jac * coeff;
      const Vector nor = fp.normal_part(cov);
      sf.gauss_defect = std::max(sf.gauss_defect, norm(cov - tang - nor, g));
      sf.conn.push_back(coeff);
      sf.nabla_coord.push_back(tang);
      sf.h_coord.push_back(nor);
    }
  }
  // Orthonormal frame: e_i = J c_i.
  std::vector<Vector> c;
  for (const Vector& e : fp.tan_frame) c.push_back(fp.domain_coords(e));
  for (int a = 0; a < k; ++a) {
    for (int b = 0; b < k; ++b) {
      Vector v = Vector::Zero(d);
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) v += c[static_cast<std::size_t>(a)](i) * c[static_cast<std::size_t>(b)](j) * sf.h_at(i, j);
      sf.h.push_back(fp.nor_coords(v));
    }
  }
  return sf;
}

namespace {

Vector bilinear(const std::vector<Vector>& table, int k, const Vector& a, const Vector& b, int rows) {
  Vector v = Vector::Zero(rows);
  for (int i = 0; i < k; ++i) {
    if (a(i) == 0.0) continue;
    for (int j = 0; j < k; ++j) v += a(i) * b(j) * table[static_cast<std::size_t>(i * k + j)];
  }
  return v;
}

}  // namespace

Vector h_of(const SecondFormData& sf, const FramedPoint& fp, const Vector& x, const Vector& y) {
  return bilinear(sf.h_coord, sf.k, fp.domain_coords(x), fp.domain_coords(y), fp.dim());
}

Vector nabla_of(const SecondFormData& sf, const FramedPoint& fp, const Vector& x, const Vector& y) {
  return bilinear(sf.nabla_coord, sf.k, fp.domain_coords(x), fp.domain_coords(y), fp.dim());
}

Vector ShapeOperator::apply(const FramedPoint& fp, const Vector& x) const {
  const Vector c = A * fp.tan_coords(x);
  Vector out = Vector::Zero(fp.dim());
  for (int j = 0; j < fp.k(); ++j) out += c(j) * fp.tan_frame[static_cast<std::size_t>(j)];
  return out;
}

Vector projected_extension_derivative(const FramedPoint& fp, const Vector& a, const Vector& N) {
  // N(q) = N0 - J G^-1 J^T g N0; J^T g N0 = 0 at p kills two of the four terms.
  const Matrix dJ = immersion::jacobian_derivative(fp, a);
  const Matrix dg = immersion::metric_derivative(fp, fp.jac * a);
  const Vector rhs = dJ.transpose() * (fp.metric() * N) + fp.jac.transpose() * (dg * N);
  return -fp.jac * fp.induced_metric.llt().solve(rhs);
}

Vector ambient_derivative(const FramedPoint& fp, const Vector& x, const Vector& N, const Vector& dN) {
  return dN + fp.gamma.contract(x, N);
}

Vector normal_connection(const FramedPoint& fp, const Vector& x, const Vector& N, const Vector& dN) {
  return fp.normal_part(ambient_derivative(fp, x, N, dN));
}

ShapeOperator shape_operator(const SecondFormData& sf, const FramedPoint& fp, const Vector& N) {
  const Matrix& g = fp.metric();
  const double scale = std::max(1.0, norm(N, g));
  if (norm(fp.tangent_part(N), g) > 1e-8 * scale) throw GeometryError("shape_operator: N is not normal");

  ShapeOperator s;
  s.N = N;
  const int k = fp.k();
  const Vector nc = fp.nor_coords(N);
  s.A.resize(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) s.A(j, i) = sf.h[static_cast<std::size_t>(i * k + j)].dot(nc);
  s.self_adjoint = numjet::max_abs(s.A - s.A.transpose());

  for (int i = 0; i < k; ++i) {
    const Vector& e = fp.tan_frame[static_cast<std::size_t>(i)];
    const Vector dN = projected_extension_derivative(fp, fp.domain_coords(e), N);
    const Vector direct = fp.tangent_part(-ambient_derivative(fp, e, N, dN));
    s.weingarten = std::max(s.weingarten, norm(direct - s.apply(fp, e), g));
  }
  return s;
}

double weingarten_residual(const SecondFormData& sf, const FramedPoint& fp, const Vector& x, const Vector& N) {
  const ShapeOperator s = shape_operator(sf, fp, N);
  const Vector dN = projected_extension_derivative(fp, fp.domain_coords(x), N);
  const Vector full = ambient_derivative(fp, x, N, dN);
  return norm(full + s.apply(fp, x) - normal_connection(fp, x, N, dN), fp.metric());
}

double mixed_tg_test(const SecondFormData& sf, const FramedPoint& fp, const VectorList& d1, const VectorList& d2) {
  const Matrix& g = fp.metric();
  const VectorList b1 = numjet::orthonormalize(d1, g).basis;
  const VectorList b2 = numjet::orthonormalize(d2, g).basis;
  for (const Vector& x : b1)
    for (const Vector& z : b2)
      if (std::abs(inner(x, z, g)) > 1e-8) throw GeometryError("mixed_tg_test: split is not orthogonal");
  double worst = 0.0;
  for (const Vector& x : b1)
    for (const Vector& z : b2) worst = std::max(worst, norm(h_of(sf, fp, x, z), g));
  return worst;
}

}  // namespace contactlab::secondform
