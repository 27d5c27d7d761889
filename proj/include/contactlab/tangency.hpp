#pragma once

// Tangential / normal parts of phi along a submanifold and slant angles.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "contactlab/immersion.hpp"

namespace contactlab::tangency {

using immersion::FramedPoint;
using numjet::Matrix;
using numjet::Vector;
using numjet::VectorList;

inline constexpr double kAngleTolerance = 1e-7;

/// phi X = P X + F X for tangent X, in frame coordinates:
/// column i of P (F) holds the tangent (normal) frame coordinates of phi e_i.
struct PFSplit {
  Matrix P;  // k x k
  Matrix F;  // codim x k
};

/// phi N = t N + f N for normal N, in frame coordinates.
struct TFSplit {
  Matrix t;    // k x codim
  Matrix fOp;  // codim x codim
};

PFSplit pf_decompose(const FramedPoint& fp);
TFSplit tf_decompose(const FramedPoint& fp);

/// Ambient-vector forms of the four operators.
Vector P_of(const FramedPoint& fp, const Vector& x);
Vector F_of(const FramedPoint& fp, const Vector& x);
Vector t_of(const FramedPoint& fp, const Vector& n);
Vector f_of(const FramedPoint& fp, const Vector& n);

/// Angle between phi X and the tangent space, in [0, pi/2].
/// Throws GeometryError if X is (nearly) proportional to xi, if phi X = 0,
/// or if |PX|/|phi X| exceeds 1 + 1e-9.
double slant_angle(const FramedPoint& fp, const Vector& x);

struct SlantReport {
  double theta = 0;
  double max_deviation = 0;
  std::vector<double> per_vector;
  std::string verdict;  // invariant, anti-invariant, pointwise-slant, not-slant
  double p_squared_residual = 0;  // max over a g-orthonormal basis of |P^2 X + cos^2(theta)(X - eta(X) xi)|
};

/// Samples 32 seeded unit vectors of span(basis). The basis must be
/// g-orthogonal to xi. Throws GeometryError on an empty span.
SlantReport slant_function(const FramedPoint& fp, const VectorList& basis, double angle_tol = kAngleTolerance,
                           std::uint64_t seed = 0x5eed);

/// Pfaffian of g(phi e_i, e_j) on the g-orthonormalized basis; for a
/// 2-plane this is cos(theta) with an orientation sign. Returns 0 for odd
/// dimension.
double signed_slant_cosine(const FramedPoint& fp, const VectorList& basis);

struct IdentityResiduals {
  double antisymmetry = 0;  // g(PX,Y) + g(X,PY)
  double p_norm = 0;        // g(PX,PY) - cos^2 (g(X,Y) - eta(X)eta(Y))
  double f_norm = 0;        // g(FX,FY) - sin^2 (...)
  double tf = 0;            // |tFX - sin^2 (-X + eta(X) xi)|_g
};

/// X, Y in one slant distribution (plus xi) with slant angle theta.
IdentityResiduals identity_residuals(const FramedPoint& fp, const Vector& x, const Vector& y, double theta);

struct SlantDerivative {
  double exact = 0;   // first-order variation of cos^2(theta)
  double fd = 0;      // central difference of the slant angle, step 1e-5
  bool flagged = false;  // |exact - fd| > 1e-4
};

/// X(theta) for X = J a, with theta measured on the tangent vector J z.
/// `z` and `a` are domain vectors. Undefined (NaN) where sin 2theta vanishes.
SlantDerivative slant_derivative(const immersion::Immersion& im, const ambient::AmbientStructure& amb,
                                 const FramedPoint& fp, const Vector& z, const Vector& a);

}  // namespace contactlab::tangency
