#pragma once

// Second fundamental form, shape operators and the normal connection.
// Everything is assembled in coordinate frames and read off in the
// orthonormal frames of the FramedPoint.

#include <vector>

#include "contactlab/immersion.hpp"

namespace contactlab::secondform {

using immersion::FramedPoint;
using numjet::Matrix;
using numjet::Vector;
using numjet::VectorList;

struct SecondFormData {
  int k = 0;
  std::vector<Vector> h_coord;      // h(d_i, d_j), ambient normal vectors, index i*k+j
  std::vector<Vector> nabla_coord;  // nabla_{d_i} d_j, ambient tangent vectors
  std::vector<Vector> h;            // h(e_i, e_j) in normal-frame coordinates (orthonormal tangent frame)
  std::vector<Vector> conn;         // nabla_{d_i} d_j = conn^l d_l, l-vector per (i,j)
  double gauss_defect = 0;          // |nabla~ d_i d_j - tangential - normal| over all (i,j)

  const Vector& h_at(int i, int j) const { return h_coord[static_cast<std::size_t>(i * k + j)]; }
  const Vector& nabla_at(int i, int j) const { return nabla_coord[static_cast<std::size_t>(i * k + j)]; }
  double symmetry_defect() const;
};

SecondFormData second_form(const FramedPoint& fp);

/// h(X, Y) for tangent vectors, through their domain coordinates.
Vector h_of(const SecondFormData& sf, const FramedPoint& fp, const Vector& x, const Vector& y);
/// nabla_X Y with X, Y extended as constant-coefficient combinations of the
/// coordinate fields.
Vector nabla_of(const SecondFormData& sf, const FramedPoint& fp, const Vector& x, const Vector& y);

struct ShapeOperator {
  Vector N;
  Matrix A;              // tangent-frame matrix, A(j, i) = g(h(e_i, e_j), N)
  double weingarten = 0;  // max |A_N e_i - tan(-nabla~_{e_i} N)| over the frame
  double self_adjoint = 0;

  /// A_N X as an ambient tangent vector.
  Vector apply(const FramedPoint& fp, const Vector& x) const;
};

/// Throws GeometryError if N has a tangential component above 1e-8.
ShapeOperator shape_operator(const SecondFormData& sf, const FramedPoint& fp, const Vector& N);

/// D_X N for the extension q -> normal projection of the constant vector N(p),
/// X = J a. Exact (first-order variation of the projector).
Vector projected_extension_derivative(const FramedPoint& fp, const Vector& a, const Vector& N);

/// nabla~_X N = dN + Gamma(X, N), given dN = D_X N.
Vector ambient_derivative(const FramedPoint& fp, const Vector& x, const Vector& N, const Vector& dN);

/// Normal part of nabla~_X N.
Vector normal_connection(const FramedPoint& fp, const Vector& x, const Vector& N, const Vector& dN);

/// |nabla~_X N + A_N X - nabla^perp_X N|_g on the projected extension of N.
double weingarten_residual(const SecondFormData& sf, const FramedPoint& fp, const Vector& x, const Vector& N);

/// max |h(X, Z)|_g over g-orthonormal bases of span(d1) and span(d2).
/// Throws GeometryError if the spans are not g-orthogonal (1e-8).
double mixed_tg_test(const SecondFormData& sf, const FramedPoint& fp, const VectorList& d1, const VectorList& d2);

}  // namespace contactlab::secondform
