#include "contactlab/numjet/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "contactlab/error.hpp"

namespace contactlab::numjet {

int arity(Op op) noexcept {
  switch (op) {
    case Op::Constant:
    case Op::Variable:
      return 0;
    case Op::Add:
    case Op::Sub:
    case Op::Mul:
    case Op::Div:
    case Op::Pow:
      return 2;
    default:
      return 1;
  }
}

const char* op_name(Op op) noexcept {
  switch (op) {
    case Op::Constant: return "constant";
    case Op::Variable: return "variable";
    case Op::Add: return "add";
    case Op::Sub: return "sub";
    case Op::Mul: return "mul";
    case Op::Div: return "div";
    case Op::Pow: return "pow";
    case Op::Neg: return "neg";
    case Op::Sin: return "sin";
    case Op::Cos: return "cos";
    case Op::Tan: return "tan";
    case Op::Exp: return "exp";
    case Op::Log: return "log";
    case Op::Sqrt: return "sqrt";
  }
  return "?";
}

namespace {

int common_arity(const Expr& a, const Expr& b) { return std::max(a.arity(), b.arity()); }

}  // namespace

Expr Expr::constant(double value) {
  auto n = std::make_shared<ExprNode>();
  n->kind = Op::Constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable(int index, int arity) {
  if (index < 0 || index >= arity) throw Error("variable index out of range");
  auto n = std::make_shared<ExprNode>();
  n->kind = Op::Variable;
  n->index = index;
  n->arity = arity;
  return Expr(std::move(n));
}

Expr Expr::unary(Op op, Expr child) {
  if (numjet::arity(op) != 1) throw Error(std::string("not a unary operator: ") + op_name(op));
  auto n = std::make_shared<ExprNode>();
  n->kind = op;
  n->arity = child.arity();
  n->children = {std::move(child)};
  return Expr(std::move(n));
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs) {
  if (numjet::arity(op) != 2 || op == Op::Pow) {
    throw Error(std::string("not a binary arithmetic operator: ") + op_name(op));
  }
  auto n = std::make_shared<ExprNode>();
  n->kind = op;
  n->arity = common_arity(lhs, rhs);
  n->children = {std::move(lhs), std::move(rhs)};
  return Expr(std::move(n));
}

Expr Expr::power(Expr base, int exponent) {
  auto n = std::make_shared<ExprNode>();
  n->kind = Op::Pow;
  n->exponent = exponent;
  n->arity = base.arity();
  n->children = {std::move(base), Expr::constant(exponent)};
  return Expr(std::move(n));
}

Op Expr::kind() const { return node_->kind; }
double Expr::value() const { return node_->value; }
int Expr::index() const { return node_->index; }
int Expr::exponent() const { return node_->exponent; }
int Expr::arity() const { return node_ ? node_->arity : 0; }
std::span<const Expr> Expr::children() const { return node_->children; }

std::string Expr::to_string(std::span<const std::string> names) const {
  const ExprNode& n = *node_;
  auto child = [&](int i) { return n.children[i].to_string(names); };
  switch (n.kind) {
    case Op::Constant: {
      std::ostringstream os;
      os.precision(17);
      os << n.value;
      return os.str();
    }
    case Op::Variable:
      if (n.index < static_cast<int>(names.size())) return names[n.index];
      return "x" + std::to_string(n.index);
    case Op::Add: return "(" + child(0) + " + " + child(1) + ")";
    case Op::Sub: return "(" + child(0) + " - " + child(1) + ")";
    case Op::Mul: return "(" + child(0) + " * " + child(1) + ")";
    case Op::Div: return "(" + child(0) + " / " + child(1) + ")";
    case Op::Pow: return "(" + child(0) + " ^ " + std::to_string(n.exponent) + ")";
    case Op::Neg: return "(-" + child(0) + ")";
    default: return std::string(op_name(n.kind)) + "(" + child(0) + ")";
  }
}

double Expr::evaluate(std::span<const double> x) const {
  const ExprNode& n = *node_;
  auto arg = [&](int i) { return n.children[i].evaluate(x); };
  switch (n.kind) {
    case Op::Constant: return n.value;
    case Op::Variable: return x[n.index];
    case Op::Add: return arg(0) + arg(1);
    case Op::Sub: return arg(0) - arg(1);
    case Op::Mul: return arg(0) * arg(1);
    case Op::Div: {
      const double d = arg(1);
      if (d == 0.0) throw DomainError("division by zero", to_string());
      return arg(0) / d;
    }
    case Op::Pow: {
      const double b = arg(0);
      if (b == 0.0 && n.exponent < 0) throw DomainError("division by zero", to_string());
      return std::pow(b, n.exponent);
    }
    case Op::Neg: return -arg(0);
    case Op::Sin: return std::sin(arg(0));
    case Op::Cos: return std::cos(arg(0));
    case Op::Tan: return std::tan(arg(0));
    case Op::Exp: return std::exp(arg(0));
    case Op::Log: {
      const double a = arg(0);
      if (!(a > 0.0)) throw DomainError("log of non-positive value", to_string());
      return std::log(a);
    }
    case Op::Sqrt: {
      const double a = arg(0);
      if (a < 0.0) throw DomainError("sqrt of negative value", to_string());
      return std::sqrt(a);
    }
  }
  return 0.0;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  const ExprNode& x = *a.node_;
  const ExprNode& y = *b.node_;
  if (x.kind != y.kind || x.children.size() != y.children.size()) return false;
  if (x.kind == Op::Constant && x.value != y.value) return false;
  if (x.kind == Op::Variable && x.index != y.index) return false;
  if (x.kind == Op::Pow && x.exponent != y.exponent) return false;
  for (std::size_t i = 0; i < x.children.size(); ++i) {
    if (!(x.children[i] == y.children[i])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Recursive-descent parser.

namespace {

class Parser {
 public:
  Parser(std::string_view text, std::span<const std::string> vars) : s_(text), vars_(vars) {}

  Expr run() {
    if (s_.find_first_not_of(" \t\r\n") == std::string_view::npos) {
      throw ParseError("empty expression", 0);
    }
    Expr e = sum();
    skip_ws();
    if (pos_ < s_.size()) {
      if (s_[pos_] == ')') throw ParseError("unbalanced parentheses", pos_);
      throw ParseError(std::string("unexpected character '") + s_[pos_] + "'", pos_);
    }
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' || s_[pos_] == '\r')) {
      ++pos_;
    }
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  int arity() const { return static_cast<int>(vars_.size()); }

  Expr sum() {
    Expr lhs = product();
    for (;;) {
      if (accept('+')) {
        lhs = Expr::binary(Op::Add, lhs, product());
      } else if (accept('-')) {
        lhs = Expr::binary(Op::Sub, lhs, product());
      } else {
        return lhs;
      }
    }
  }

  Expr product() {
    Expr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = Expr::binary(Op::Mul, lhs, unary());
      } else if (accept('/')) {
        lhs = Expr::binary(Op::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return Expr::unary(Op::Neg, unary());
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (!accept('^')) return base;
    skip_ws();
    const std::size_t at = pos_;
    Expr e = unary();
    double v = 0.0;
    if (e.kind() == Op::Constant) {
      v = e.value();
    } else if (e.kind() == Op::Neg && e.children()[0].kind() == Op::Constant) {
      v = -e.children()[0].value();
    } else {
      throw ParseError("exponent must be an integer constant", at);
    }
    if (v != std::floor(v) || std::abs(v) > 1024) {
      throw ParseError("exponent must be an integer constant", at);
    }
    return Expr::power(base, static_cast<int>(v));
  }

  [[noreturn]] void missing_operand() {
    if (pos_ >= s_.size() && depth_ > 0) throw ParseError("unbalanced parentheses", s_.size());
    throw ParseError("empty operand", pos_);
  }

  Expr parenthesized() {
    ++depth_;
    Expr inner = sum();
    if (!accept(')')) {
      skip_ws();
      throw ParseError("unbalanced parentheses", pos_);
    }
    --depth_;
    return inner;
  }

  Expr atom() {
    skip_ws();
    if (pos_ >= s_.size()) missing_operand();
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      return parenthesized();
    }
    if ((c >= '0' && c <= '9') || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    missing_operand();
  }

  Expr number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t q = pos_ + 1;
      if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) ++q;
      if (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) {
        pos_ = q;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      }
    }
    double v = 0.0;
    const auto r = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (r.ec != std::errc() || r.ptr != s_.data() + pos_) throw ParseError("malformed number", start);
    return Expr::constant(v);
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string_view name = s_.substr(start, pos_ - start);

    const std::size_t after = pos_;
    skip_ws();
    const bool call = pos_ < s_.size() && s_[pos_] == '(';
    if (call) {
      static constexpr std::pair<std::string_view, Op> kFunctions[] = {
          {"sin", Op::Sin}, {"cos", Op::Cos}, {"tan", Op::Tan},
          {"exp", Op::Exp}, {"log", Op::Log}, {"sqrt", Op::Sqrt}};
      for (const auto& [fname, op] : kFunctions) {
        if (fname == name) {
          ++pos_;
          return Expr::unary(op, parenthesized());
        }
      }
      throw ParseError("unknown identifier '" + std::string(name) + "'", start);
    }
    pos_ = after;
    for (int i = 0; i < arity(); ++i) {
      if (vars_[i] == name) return Expr::variable(i, arity());
    }
    throw ParseError("unknown identifier '" + std::string(name) + "'", start);
  }

  std::string_view s_;
  std::span<const std::string> vars_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text, std::span<const std::string> variables) {
  return Parser(text, variables).run();
}

}  // namespace contactlab::numjet
