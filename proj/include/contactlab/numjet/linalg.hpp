#pragma once

// Small dense linear algebra in a (possibly non-Euclidean) inner product.
// Vectors are Eigen column vectors; "lists" of vectors are std::vector.

#include <Eigen/Dense>
#include <vector>

namespace contactlab::numjet {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using VectorList = std::vector<Vector>;

/// Post-projection g-norm below which a vector is treated as dependent.
inline constexpr double kRankTolerance = 1e-10;

inline double inner(const Vector& a, const Vector& b, const Matrix& metric) {
  return a.dot(metric * b);
}
inline double norm(const Vector& a, const Matrix& metric) {
  return std::sqrt(std::max(0.0, inner(a, a, metric)));
}

struct Orthonormalized {
  VectorList basis;
  int rank = 0;
};

/// Modified Gram-Schmidt with one re-orthogonalization pass, in the inner
/// product defined by the SPD `metric`. Vectors whose g-norm after
/// projection falls below kRankTolerance are dropped; `rank` counts the
/// survivors. Order is preserved.
Orthonormalized orthonormalize(const VectorList& vectors, const Matrix& metric,
                               double tolerance = kRankTolerance);

struct Projection {
  Vector component;  // in span(basis)
  Vector residual;   // g-orthogonal to span(basis)
};

/// Splits `v` against a g-orthonormal basis. Throws GeometryError if the
/// basis fails g-orthonormality by more than 1e-8.
Projection metric_project(const Vector& v, const VectorList& basis, const Matrix& metric);

/// Projection without the orthonormality check (hot loops with trusted frames).
Vector project_onto(const Vector& v, const VectorList& basis, const Matrix& metric);

/// Max-abs deviation of the Gram matrix of `basis` from the identity.
double orthonormality_defect(const VectorList& basis, const Matrix& metric);

/// Columns of a matrix as a list, and back.
VectorList columns(const Matrix& m);
Matrix stack_columns(const VectorList& vs, Eigen::Index rows);

/// Cholesky-based SPD test.
bool is_spd(const Matrix& m);

/// Max-abs entry, 0 for empty.
double max_abs(const Matrix& m);

}  // namespace contactlab::numjet
