#include "contactlab/numjet/linalg.hpp"

#include <algorithm>

#include "contactlab/error.hpp"

namespace contactlab::numjet {

Orthonormalized orthonormalize(const VectorList& vectors, const Matrix& metric, double tolerance) {
  Orthonormalized out;
  for (const Vector& v : vectors) {
    Vector w = v;
    // Two passes of MGS: the second removes what round-off left behind.
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vector& q : out.basis) w -= inner(q, w, metric) * q;
    }
    const double n = norm(w, metric);
    if (n < tolerance) continue;
    out.basis.push_back(w / n);
  }
  out.rank = static_cast<int>(out.basis.size());
  return out;
}

double orthonormality_defect(const VectorList& basis, const Matrix& metric) {
  double worst = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = i; j < basis.size(); ++j) {
      const double target = i == j ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(inner(basis[i], basis[j], metric) - target));
    }
  }
  return worst;
}

Vector project_onto(const Vector& v, const VectorList& basis, const Matrix& metric) {
  Vector c = Vector::Zero(v.size());
  const Vector gv = metric * v;
  for (const Vector& q : basis) c += q.dot(gv) * q;
  return c;
}

Projection metric_project(const Vector& v, const VectorList& basis, const Matrix& metric) {
  if (orthonormality_defect(basis, metric) > 1e-8) {
    throw GeometryError("metric_project: basis is not g-orthonormal");
  }
  Projection p;
  p.component = project_onto(v, basis, metric);
  p.residual = v - p.component;
  return p;
}

VectorList columns(const Matrix& m) {
  VectorList out;
  out.reserve(static_cast<std::size_t>(m.cols()));
  for (Eigen::Index j = 0; j < m.cols(); ++j) out.emplace_back(m.col(j));
  return out;
}

Matrix stack_columns(const VectorList& vs, Eigen::Index rows) {
  Matrix m(rows, static_cast<Eigen::Index>(vs.size()));
  for (std::size_t j = 0; j < vs.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = vs[j];
  return m;
}

bool is_spd(const Matrix& m) {
  if (m.rows() != m.cols()) return false;
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, m.cwiseAbs().maxCoeff())) return false;
  Eigen::LLT<Matrix> llt(m);
  return llt.info() == Eigen::Success;
}

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace contactlab::numjet
