#pragma once

#include <Eigen/Dense>
#include <span>

#include "contactlab/numjet/expr.hpp"

namespace contactlab::numjet {

/// Second-order Taylor data of a scalar at a point: value, gradient and
/// Hessian with respect to the k variables of the evaluation context.
///
/// Arithmetic propagates all three orders exactly (no finite differences).
/// The Hessian is kept symmetric by construction: every update is a sum of
/// symmetric rank-one or scaled symmetric terms.
struct Jet2 {
  double value = 0.0;
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;

  static Jet2 constant(double c, int k);
  /// The coordinate function x_i at `x`.
  static Jet2 variable(int i, double x, int k);

  int size() const noexcept { return static_cast<int>(grad.size()); }
};

Jet2 operator+(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a, const Jet2& b);
Jet2 operator*(const Jet2& a, const Jet2& b);
Jet2 operator/(const Jet2& a, const Jet2& b);
Jet2 operator-(const Jet2& a);
Jet2 operator*(double s, const Jet2& a);

/// Applies a scalar function given f(v), f'(v), f''(v) at v = a.value.
Jet2 chain(const Jet2& a, double f0, double f1, double f2);

Jet2 sin(const Jet2& a);
Jet2 cos(const Jet2& a);
Jet2 tan(const Jet2& a);
Jet2 exp(const Jet2& a);
Jet2 log(const Jet2& a);   // requires a.value > 0
Jet2 sqrt(const Jet2& a);  // requires a.value > 0
Jet2 pow(const Jet2& a, int exponent);

/// Evaluates value, gradient and Hessian of `expr` at `point`.
/// Throws DomainError naming the offending subexpression.
Jet2 eval_jet2(const Expr& expr, std::span<const double> point);
Jet2 eval_jet2(const Expr& expr, const Eigen::VectorXd& point);

}  // namespace contactlab::numjet
