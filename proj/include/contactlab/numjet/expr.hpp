#pragma once

// Expression trees over an ordered list of real variables.
//
// Grammar (ASCII, case-sensitive):
//   sum     := product (('+' | '-') product)*
//   product := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := atom ('^' unary)?          right associative
//   atom    := number | name | func '(' sum ')' | '(' sum ')'
//   func    := sin | cos | tan | exp | log | sqrt
//
// Exponents must be integer constants; write general powers as
// exp(b*log(a)).

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace contactlab::numjet {

enum class Op { Constant, Variable, Add, Sub, Mul, Div, Pow, Neg, Sin, Cos, Tan, Exp, Log, Sqrt };

/// Number of children an operator takes.
int arity(Op op) noexcept;
const char* op_name(Op op) noexcept;

struct ExprNode;

/// Immutable, shared expression handle. Copies share the tree.
class Expr {
 public:
  Expr() = default;

  static Expr constant(double value);
  static Expr variable(int index, int arity);
  static Expr unary(Op op, Expr child);
  static Expr binary(Op op, Expr lhs, Expr rhs);
  /// `base ^ exponent` with integer exponent.
  static Expr power(Expr base, int exponent);

  bool valid() const noexcept { return node_ != nullptr; }
  Op kind() const;
  double value() const;  // constants only
  int index() const;     // variables only
  int exponent() const;  // Pow only
  /// Number of variables of the context the expression was built in.
  int arity() const;
  std::span<const Expr> children() const;

  /// Fully parenthesized canonical rendering with variable names `x0, x1, ...`
  /// unless `names` is given.
  std::string to_string(std::span<const std::string> names = {}) const;

  /// Plain double evaluation. Throws DomainError.
  double evaluate(std::span<const double> point) const;

  friend bool operator==(const Expr& a, const Expr& b);

 private:
  explicit Expr(std::shared_ptr<const ExprNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const ExprNode> node_;
};

struct ExprNode {
  Op kind;
  std::vector<Expr> children;
  double value = 0.0;
  int index = -1;
  int exponent = 0;
  int arity = 0;
};

/// Parses `text` over the given ordered variable names.
/// Throws ParseError (unknown identifier, unbalanced parentheses, empty
/// operand, non-integer exponent) carrying the byte offset.
Expr parse_expr(std::string_view text, std::span<const std::string> variables);

}  // namespace contactlab::numjet
