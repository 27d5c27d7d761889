#include "contactlab/numjet/jet.hpp"

#include <cmath>

#include "contactlab/error.hpp"

namespace contactlab::numjet {

Jet2 Jet2::constant(double c, int k) {
  return {c, Eigen::VectorXd::Zero(k), Eigen::MatrixXd::Zero(k, k)};
}

Jet2 Jet2::variable(int i, double x, int k) {
  Jet2 j = constant(x, k);
  j.grad(i) = 1.0;
  return j;
}

Jet2 operator+(const Jet2& a, const Jet2& b) { return {a.value + b.value, a.grad + b.grad, a.hess + b.hess}; }
Jet2 operator-(const Jet2& a, const Jet2& b) { return {a.value - b.value, a.grad - b.grad, a.hess - b.hess}; }
Jet2 operator-(const Jet2& a) { return {-a.value, -a.grad, -a.hess}; }
Jet2 operator*(double s, const Jet2& a) { return {s * a.value, s * a.grad, s * a.hess}; }

Jet2 operator*(const Jet2& a, const Jet2& b) {
  Eigen::MatrixXd cross = a.grad * b.grad.transpose();
  return {a.value * b.value, a.value * b.grad + b.value * a.grad,
          a.value * b.hess + b.value * a.hess + cross + cross.transpose()};
}

Jet2 chain(const Jet2& a, double f0, double f1, double f2) {
  return {f0, f1 * a.grad, f1 * a.hess + f2 * (a.grad * a.grad.transpose())};
}

Jet2 operator/(const Jet2& a, const Jet2& b) {
  const double v = b.value;
  return a * chain(b, 1.0 / v, -1.0 / (v * v), 2.0 / (v * v * v));
}

Jet2 sin(const Jet2& a) {
  const double s = std::sin(a.value), c = std::cos(a.value);
  return chain(a, s, c, -s);
}

Jet2 cos(const Jet2& a) {
  const double s = std::sin(a.value), c = std::cos(a.value);
  return chain(a, c, -s, -c);
}

Jet2 tan(const Jet2& a) {
  const double t = std::tan(a.value);
  const double sec2 = 1.0 + t * t;
  return chain(a, t, sec2, 2.0 * t * sec2);
}

Jet2 exp(const Jet2& a) {
  const double e = std::exp(a.value);
  return chain(a, e, e, e);
}

Jet2 log(const Jet2& a) {
  const double v = a.value;
  return chain(a, std::log(v), 1.0 / v, -1.0 / (v * v));
}

Jet2 sqrt(const Jet2& a) {
  const double s = std::sqrt(a.value);
  return chain(a, s, 0.5 / s, -0.25 / (s * s * s));
}

Jet2 pow(const Jet2& a, int n) {
  if (n == 0) return Jet2::constant(1.0, a.size());
  const double v = a.value;
  const double f0 = std::pow(v, n);
  const double f1 = n * std::pow(v, n - 1);
  const double f2 = n == 1 ? 0.0 : static_cast<double>(n) * (n - 1) * std::pow(v, n - 2);
  return chain(a, f0, f1, f2);
}

namespace {

Jet2 eval(const Expr& e, std::span<const double> x) {
  const int k = static_cast<int>(x.size());
  auto arg = [&](int i) { return eval(e.children()[i], x); };
  switch (e.kind()) {
    case Op::Constant: return Jet2::constant(e.value(), k);
    case Op::Variable:
      if (e.index() >= k) throw Error("variable index exceeds point dimension");
      return Jet2::variable(e.index(), x[e.index()], k);
    case Op::Add: return arg(0) + arg(1);
    case Op::Sub: return arg(0) - arg(1);
    case Op::Mul: return arg(0) * arg(1);
    case Op::Div: {
      Jet2 d = arg(1);
      if (d.value == 0.0) throw DomainError("division by zero", e.to_string());
      return arg(0) / d;
    }
    case Op::Pow: {
      Jet2 b = arg(0);
      if (b.value == 0.0 && e.exponent() < 0) throw DomainError("division by zero", e.to_string());
      return pow(b, e.exponent());
    }
    case Op::Neg: return -arg(0);
    case Op::Sin: return sin(arg(0));
    case Op::Cos: return cos(arg(0));
    case Op::Tan: return tan(arg(0));
    case Op::Exp: return exp(arg(0));
    case Op::Log: {
      Jet2 a = arg(0);
      if (!(a.value > 0.0)) throw DomainError("log of non-positive value", e.to_string());
      return log(a);
    }
    case Op::Sqrt: {
      Jet2 a = arg(0);
      // The derivative blows up at 0, so the jet needs a strictly positive argument.
      if (!(a.value > 0.0)) throw DomainError("sqrt of non-positive value", e.to_string());
      return sqrt(a);
    }
  }
  throw Error("corrupt expression node");
}

}  // namespace

Jet2 eval_jet2(const Expr& expr, std::span<const double> point) { return eval(expr, point); }

Jet2 eval_jet2(const Expr& expr, const Eigen::VectorXd& point) {
  return eval(expr, std::span<const double>(point.data(), static_cast<std::size_t>(point.size())));
}

}  // namespace contactlab::numjet
