#pragma once

// Warped-product recovery from a declared base/fiber split of the domain
// variables, and the identity suite for warped products M_T x_f M_theta.
//
// f is only known up to a constant (normalized to 1 at the reference base
// point); every identity consumes d(ln f), which does not see that constant.

#include <map>
#include <string>
#include <vector>

#include "contactlab/catalog.hpp"
#include "contactlab/secondform.hpp"
#include "contactlab/semislant.hpp"

namespace contactlab::warped {

using immersion::FramedPoint;
using numjet::Matrix;
using numjet::Vector;
using numjet::VectorList;

struct WarpedCandidate {
  immersion::Immersion im;
  ambient::AmbientStructure amb;
  immersion::WarpDeclaration decl;
};

/// Checks that base and fiber variables are disjoint and cover the domain.
void validate_declaration(const WarpedCandidate& c);

struct WarpSample {
  Vector p;
  double f = 1;
  Vector lnf_grad;             // d(ln f)/d(domain variable); fiber entries are measured, not assumed
  double offblock = 0;         // max |G_ab| / sqrt(G_aa G_bb), a base, b fiber
  double base_dependence = 0;  // max |d_fiber G_base| / max |G_base|
  double factor_spread = 0;    // spread of G_F(u,v) / G_F(u0,v) over entries, relative
  double fiber_lnf = 0;        // max |d_fiber ln f|
};

/// Metric data at one framed point, without verdicts.
WarpSample warp_sample(const WarpedCandidate& c, const FramedPoint& fp);

struct WarpReport {
  std::vector<WarpSample> samples;
  double max_offblock = 0;
  double max_base_dependence = 0;
  double max_factor_spread = 0;
  double max_fiber_lnf = 0;
  double max_grad = 0;  // max |grad ln f|_g
  bool trivial = false;
};

/// Throws WarpError when the block structure or the factorization fails
/// beyond `tol`.
WarpReport detect_warp(const WarpedCandidate& c, const std::vector<Vector>& points, double tol = 1e-8);

/// A residual, or the reason it was not evaluated.
struct LemmaValue {
  double value = 0;
  std::string refused;

  bool ok() const { return refused.empty(); }
  static LemmaValue of(double v) { return {v, {}}; }
  static LemmaValue refuse(std::string why) { return {0, std::move(why)}; }
};

/// Everything the warped identities need at one point.
struct WarpPoint {
  FramedPoint fp;
  secondform::SecondFormData sf;
  WarpSample warp;
  semislant::DistributionSplit split;
  VectorList base_frame;   // orthonormal D, then unit xi
  VectorList fiber_frame;  // orthonormal D^theta
  Vector fiber_domain;     // domain vector of the first D^theta direction
  double theta = 0;
  double sasakian = 0;     // Sasakian defect at the point
  double xi_in_fiber = 0;  // |fiber part of unit xi|

  /// X(ln f) for a tangent vector X.
  double d_lnf(const Vector& x) const;
  /// grad(ln f) as an ambient tangent vector.
  Vector grad_lnf() const;
};

WarpPoint prepare_point(const WarpedCandidate& c, const immersion::DomainSplit& split, const Vector& p);

struct BishopONeill {
  double connection = 0;       // |nabla_X Z - X(ln f) Z|, coordinate fields, normalized
  double base_geodesic = 0;    // |fiber part of nabla_X Y|
  double fiber_umbilical = 0;  // |base part of nabla_Z W + g(Z,W) grad ln f|
};

/// Maximum over coordinate fields of the base and the fiber.
BishopONeill bishop_oneill_check(const WarpedCandidate& c, const WarpPoint& wp);
/// Single pair, X base and Z fiber tangent vectors (constant domain coefficients).
double bishop_oneill_residual(const WarpPoint& wp, const Vector& x, const Vector& z);

struct LemmaReport {
  std::map<std::string, LemmaValue> values;
  Vector point;
  double theta = 0;
  double xi_lnf = 0;
  std::vector<double> x_lnf;    // X(ln f) over the base frame
  std::vector<double> x_theta;  // X(theta) over the base frame (NaN when undefined)
  bool x_theta_flagged = false;
};

/// Keys evaluated when `selectors` is empty.
const std::vector<std::string>& lemma_keys();

/// Identities on frame bases: X, Y run over the base frame, Z, W over the
/// fiber frame; each value is the max |LHS - RHS|. Keys:
/// L2 L3i L3ii L3iii L4 L5 L6 L7 L8 L10 T4 T5 C2 C2_literal chain_L7 chain_L8.
LemmaReport lemma_suite(const WarpedCandidate& c, const WarpPoint& wp, const std::vector<std::string>& selectors = {});

LemmaValue theorem4_check(const WarpedCandidate& c, const WarpPoint& wp, const Vector& x);
LemmaValue theorem5_forward(const WarpPoint& wp, const Vector& x, const Vector& w);
/// A_{phi Z} X = -(eta(X) + phi X(ln f)) Z, the form consistent with
/// nabla~ xi = -phi X. `literal` switches to (eta(X) - phi X(ln f)) Z.
LemmaValue corollary2_check(const WarpPoint& wp, const Vector& x, const Vector& z, bool literal = false);

}  // namespace contactlab::warped
