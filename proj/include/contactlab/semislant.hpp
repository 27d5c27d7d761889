#pragma once

#include <string>
#include <vector>

#include "contactlab/catalog.hpp"
#include "contactlab/secondform.hpp"
#include "contactlab/tangency.hpp"

namespace contactlab::semislant {

using immersion::FramedPoint;
using numjet::Matrix;
using numjet::Vector;
using numjet::VectorList;

/// TM = D + D^theta + <xi>, as ambient tangent vectors at one point.
struct DistributionSplit {
  VectorList D;       // g-orthogonal to xi
  VectorList Dtheta;
  Vector xi_dir;
  int m1() const { return static_cast<int>(D.size()); }
  int m2() const { return static_cast<int>(Dtheta.size()); }
};

/// Pushes a domain split forward. D vectors lose their component along xi;
/// the xi direction defaults to the tangent part of xi.
DistributionSplit resolve_split(const FramedPoint& fp, const immersion::DomainSplit& split);

struct SplitResiduals {
  double orthogonality = 0;  // max |g(a,b)| over unit vectors from different parts
  double completeness = 0;   // tangent frame reconstruction defect
  double d_invariance = 0;   // max |F X| over unit X in D, and |phi xi|
  double slant_deviation = 0;
  double p_squared = 0;
  double xi_alignment = 0;   // distance of unit xi from the declared xi direction
  double theta = 0;          // slant angle of D^theta (0 when m2 = 0)
  int m1 = 0;
  int m2 = 0;
  double max() const;
};

/// Throws GeometryError if m1 + m2 + 1 != k.
SplitResiduals verify_split(const FramedPoint& fp, const DistributionSplit& split);

/// Case label from per-point results. theta counts as constant when its
/// standard deviation over the points is below angle_tol.
std::string classify(const std::vector<SplitResiduals>& points, double angle_tol = tangency::kAngleTolerance);
std::string classify(const FramedPoint& fp, const DistributionSplit& split);

struct NormalSplit {
  VectorList FDtheta;
  VectorList nu;
  double nu_invariance = 0;  // max |phi N - proj_nu(phi N)| over unit N in nu
};

/// Throws GeometryError if dim F(D^theta) != m2 while sin(theta) > 1e-6.
NormalSplit normal_split(const FramedPoint& fp, const DistributionSplit& split);

struct Lemma1Residuals {
  double first = 0;   // sin^2 g(nabla_X Y, Z) - g(h(X, phi Y), FZ) + g(h(X, Y), FPZ)
  double second = 0;  // sin^2 g(nabla_Z W, X) - g(h(X, Z), FPW) + g(h(phi X, Z), FW)
};

/// Max Sasakian residual over pairs of tangent frame vectors.
double sasakian_defect(const FramedPoint& fp);

/// X, Y in D + <xi>; Z, W in D^theta; vector fields extended with constant
/// domain coefficients. Throws GeometryError on a non-Sasakian ambient.
Lemma1Residuals lemma1_residuals(const FramedPoint& fp, const secondform::SecondFormData& sf, double theta,
                                 const Vector& x, const Vector& y, const Vector& z, const Vector& w);

}  // namespace contactlab::semislant
