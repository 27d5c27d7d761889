#pragma once

// Almost contact metric structures (phi, xi, eta, g) on R^(2n+1).
//
// Coordinates are ordered (x1, y1, ..., xn, yn, z). Every tensor entry is an
// expression in those coordinates, so first derivatives come out of the jet
// evaluator exactly.

#include <string>
#include <vector>

#include "contactlab/numjet/expr.hpp"
#include "contactlab/numjet/jet.hpp"
#include "contactlab/numjet/linalg.hpp"

namespace contactlab::ambient {

using numjet::Expr;
using numjet::Matrix;
using numjet::Vector;

/// Structure tensors and their first partials at one ambient point.
struct StructureSample {
  Vector point;
  Matrix phi;
  Matrix metric;
  Matrix metric_inv;
  Vector xi;
  Vector eta;
  std::vector<Matrix> dphi;     // dphi[m] = d/dx_m phi
  std::vector<Matrix> dmetric;  // dmetric[m] = d/dx_m g
  std::vector<Vector> dxi;
  std::vector<Vector> deta;

  int dim() const { return static_cast<int>(point.size()); }
};

class AmbientStructure {
 public:
  /// Row-major (2n+1)x(2n+1) expression lists for phi and g; xi and eta
  /// have 2n+1 entries each. `sasakian_model` marks constructions that are
  /// meant to satisfy the Sasakian condition (used by report verdicts only;
  /// every consumer still verifies numerically).
  AmbientStructure(std::string name, int n, std::vector<Expr> phi, std::vector<Expr> xi,
                   std::vector<Expr> eta, std::vector<Expr> metric, bool sasakian_model);

  /// Same, parsing each entry over the coordinate names.
  static AmbientStructure from_strings(std::string name, int n, const std::vector<std::string>& phi,
                                       const std::vector<std::string>& xi,
                                       const std::vector<std::string>& eta,
                                       const std::vector<std::string>& metric, bool sasakian_model);

  const std::string& name() const noexcept { return name_; }
  int n() const noexcept { return n_; }
  int dim() const noexcept { return 2 * n_ + 1; }
  bool sasakian_model() const noexcept { return sasakian_model_; }
  const std::vector<std::string>& coordinate_names() const noexcept { return coords_; }

  /// Evaluates all tensors with first derivatives. Throws GeometryError if g
  /// is not SPD at p.
  StructureSample sample(const Vector& p) const;

  Matrix phi(const Vector& p) const;
  Matrix metric(const Vector& p) const;
  Vector xi(const Vector& p) const;
  Vector eta(const Vector& p) const;

  /// Every entry expression, for differentiation oracles.
  std::vector<Expr> all_expressions() const;

 private:
  std::string name_;
  int n_;
  std::vector<Expr> phi_, xi_, eta_, metric_;
  bool sasakian_model_;
  std::vector<std::string> coords_;
};

/// Coordinate names (x1, y1, ..., xn, yn, z).
std::vector<std::string> coordinate_names(int n);

/// Flat structure: phi(d/dx_i) = -d/dy_i, phi(d/dy_i) = d/dx_i, phi(d/dz) = 0,
/// xi = d/dz, eta = dz, g Euclidean. Almost contact metric, not Sasakian.
AmbientStructure make_euclidean_acm(int n);

/// The standard Sasakian structure on R^(2n+1):
///   eta = (dz - sum y_i dx_i) / 2,  xi = 2 d/dz,
///   g = eta (x) eta + (sum dx_i^2 + dy_i^2) / 4,
///   phi(d/dx_i) = -d/dy_i,  phi(d/dy_i) = d/dx_i + y_i d/dz,  phi(d/dz) = 0.
/// With this sign of phi the Levi-Civita connection satisfies
/// nabla_X xi = -phi X. The constructor re-verifies the axioms and the
/// Sasakian identities at seeded probe points and throws GeometryError if
/// any residual reaches 1e-9.
AmbientStructure make_standard_sasakian(int n);

/// Lookup by CLI name: "euclidean_acm" or "standard_sasakian".
AmbientStructure make_ambient(const std::string& name, int n);

struct AlmostContactResiduals {
  double phi_squared = 0;    // max |phi^2 + I - eta (x) xi|
  double eta_xi = 0;         // |eta(xi) - 1|
  double eta_phi = 0;        // max |eta o phi|
  double phi_xi = 0;         // max |phi xi|
  double compatibility = 0;  // max |g(phi e_i, phi e_j) - g_ij + eta_i eta_j|
  double max() const;
};

AlmostContactResiduals check_almost_contact(const StructureSample& s);
AlmostContactResiduals check_almost_contact(const AmbientStructure& s, const Vector& p);

/// Gamma^k_ij of the Levi-Civita connection at a point.
class ChristoffelData {
 public:
  explicit ChristoffelData(int dim) : dim_(dim), gamma_(static_cast<std::size_t>(dim * dim * dim), 0.0) {}

  int dim() const noexcept { return dim_; }
  double& operator()(int k, int i, int j) { return gamma_[index(k, i, j)]; }
  double operator()(int k, int i, int j) const { return gamma_[index(k, i, j)]; }

  /// Gamma(X, Y)^k = Gamma^k_ij X^i Y^j.
  Vector contract(const Vector& x, const Vector& y) const;
  /// max |Gamma^k_ij - Gamma^k_ji|.
  double symmetry_defect() const;
  double max_abs() const;

 private:
  std::size_t index(int k, int i, int j) const {
    return static_cast<std::size_t>((k * dim_ + i) * dim_ + j);
  }
  int dim_;
  std::vector<double> gamma_;
};

ChristoffelData christoffel(const StructureSample& s);
ChristoffelData christoffel(const AmbientStructure& s, const Vector& p);

/// Vector field on the ambient space given componentwise.
struct VectorFieldExpr {
  std::vector<Expr> components;
};

/// (nabla~_direction field)(p) = D_direction field + Gamma(direction, field).
Vector ambient_cov_deriv(const AmbientStructure& s, const VectorFieldExpr& field, const Vector& direction,
                         const Vector& p);

struct SasakianResiduals {
  double structure = 0;  // |(nabla~_X phi) Y - g(X,Y) xi + eta(Y) X|_g
  double reeb = 0;       // |nabla~_X xi + phi X|_g
};

/// X and Y are extended as constant coordinate fields; phi Y as q -> phi(q) Y.
SasakianResiduals check_sasakian(const StructureSample& s, const ChristoffelData& gamma, const Vector& x,
                                 const Vector& y);
SasakianResiduals check_sasakian(const AmbientStructure& s, const Vector& p, const Vector& x, const Vector& y);

/// (nabla~_X phi) at a sample, as a matrix acting on Y.
Matrix covariant_phi_derivative(const StructureSample& s, const ChristoffelData& gamma, const Vector& x);

/// nabla~_X xi at a sample.
Vector covariant_xi_derivative(const StructureSample& s, const ChristoffelData& gamma, const Vector& x);

}  // namespace contactlab::ambient
