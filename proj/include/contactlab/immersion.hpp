#pragma once

// Parametrized immersions chi: box in R^k -> R^(2n+1) and the frame data
// every downstream check is built from.

#include <cstdint>
#include <string>
#include <vector>

#include "contactlab/ambient.hpp"
#include "contactlab/numjet/expr.hpp"
#include "contactlab/numjet/linalg.hpp"

namespace contactlab::immersion {

using numjet::Expr;
using numjet::Matrix;
using numjet::Vector;
using numjet::VectorList;

/// Sampling keeps |predicate| at least this far from zero.
inline constexpr double kExclusionMargin = 1e-3;

struct Interval {
  double lo = 0;
  double hi = 0;
};

class Immersion {
 public:
  /// `components` must have one entry per ambient coordinate, each an
  /// expression over `variables`. A point is excluded when some exclusion
  /// expression vanishes there.
  static Immersion from_strings(std::vector<std::string> variables, std::vector<std::string> components,
                                std::vector<Interval> domain, std::vector<std::string> exclusions = {});

  int k() const noexcept { return static_cast<int>(variables_.size()); }
  int ambient_dim() const noexcept { return static_cast<int>(components_.size()); }
  const std::vector<std::string>& variables() const noexcept { return variables_; }
  const std::vector<std::string>& component_text() const noexcept { return component_text_; }
  const std::vector<std::string>& exclusion_text() const noexcept { return exclusion_text_; }
  const std::vector<Expr>& components() const noexcept { return components_; }
  const std::vector<Expr>& exclusions() const noexcept { return exclusions_; }
  const std::vector<Interval>& domain() const noexcept { return domain_; }

  Vector position(const Vector& p) const;
  /// Smallest |predicate| over the exclusions (+inf if none).
  double exclusion_distance(const Vector& p) const;
  bool in_domain(const Vector& p) const;

 private:
  std::vector<std::string> variables_;
  std::vector<std::string> component_text_;
  std::vector<std::string> exclusion_text_;
  std::vector<Expr> components_;
  std::vector<Expr> exclusions_;
  std::vector<Interval> domain_;
};

struct FramedPoint {
  Vector p;                   // domain point
  Vector pos;                 // chi(p)
  Matrix jac;                 // (2n+1) x k
  std::vector<Matrix> hess;   // hess[m] = Hessian of component m, k x k
  VectorList tan_frame;       // g-orthonormal, k vectors
  VectorList nor_frame;       // g-orthonormal, 2n+1-k vectors
  Matrix induced_metric;      // J^T g J
  ambient::StructureSample structure;
  ambient::ChristoffelData gamma{0};

  int k() const { return static_cast<int>(jac.cols()); }
  int dim() const { return static_cast<int>(jac.rows()); }
  int codim() const { return dim() - k(); }
  const Matrix& metric() const { return structure.metric; }

  /// Push a domain vector forward: J v.
  Vector push(const Vector& domain_vector) const { return jac * domain_vector; }
  /// Tangent and normal frame coordinates of an ambient vector.
  Vector tan_coords(const Vector& v) const;
  Vector nor_coords(const Vector& v) const;
  Vector tangent_part(const Vector& v) const;
  Vector normal_part(const Vector& v) const;
  /// Domain coordinates a of a tangent vector x = J a.
  Vector domain_coords(const Vector& x) const;
  /// Frame matrices with the frame vectors as columns.
  Matrix tan_matrix() const;
  Matrix nor_matrix() const;
};

/// Throws GeometryError if p is excluded (|predicate| <= exclusion_tol) or the
/// Jacobian has rank below k.
FramedPoint frame_at(const Immersion& im, const ambient::AmbientStructure& amb, const Vector& p,
                     double exclusion_tol = 1e-12);

Matrix induced_metric(const FramedPoint& fp);

/// Derivative of J along the domain direction a: (dJ)(m, j) = sum_i a_i d_i d_j chi^m.
Matrix jacobian_derivative(const FramedPoint& fp, const Vector& a);
/// Derivatives of phi and g along the ambient vector v.
Matrix phi_derivative(const FramedPoint& fp, const Vector& v);
Matrix metric_derivative(const FramedPoint& fp, const Vector& v);
/// Exact derivative of the induced metric J^T g J along the domain direction a.
Matrix induced_metric_derivative(const FramedPoint& fp, const Vector& a);

struct XiTangency {
  double normal_part = 0;   // |xi^perp|_g
  double tangent_part = 0;  // |xi^T|_g
  std::string verdict;      // "tangent", "normal" or "mixed"
};

XiTangency xi_tangency(const FramedPoint& fp, double tol = 1e-8);

/// Uniform seeded draws from the domain box, rejecting points within
/// `margin` of an exclusion. Throws GeometryError if the box is (almost)
/// entirely excluded.
std::vector<Vector> sample_points(const Immersion& im, int count, std::uint64_t seed,
                                  double margin = kExclusionMargin);

}  // namespace contactlab::immersion
