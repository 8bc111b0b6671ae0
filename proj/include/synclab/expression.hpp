#pragma once

#include <cctype>
#include <cmath>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "synclab/error.hpp"

namespace synclab {

/// Immutable symbolic expression over variables t1..tN with + - * / ^, sin
/// and cos. Exponents must be integer constants so every expression is
/// smooth where it is defined and can be differentiated exactly.
class Expression {
 public:
  enum class Kind { Const, Var, Neg, Add, Sub, Mul, Div, Pow, Sin, Cos };

  Expression() : Expression(constant(0.0)) {}

  static Expression constant(double v) { return Expression(std::make_shared<Node>(Node{Kind::Const, v, 0, {}, {}})); }
  static Expression variable(int index) {
    return Expression(std::make_shared<Node>(Node{Kind::Var, 0.0, index, {}, {}}));
  }

  Kind kind() const { return node_->kind; }
  bool is_constant() const { return kind() == Kind::Const; }
  bool is_constant(double v) const { return is_constant() && node_->value == v; }
  double value() const { return node_->value; }

  /// Evaluates with t[i] bound to variable i (0-based, printed as t{i+1}).
  double evaluate(std::span<const double> t) const { return eval(*node_, t); }

  /// Exact partial derivative with respect to variable `index`.
  Expression derivative(int index) const { return diff(*this, index); }

  std::string to_string() const { return print(*node_); }

  friend Expression operator+(const Expression& a, const Expression& b) {
    if (a.is_constant() && b.is_constant()) return constant(a.value() + b.value());
    if (a.is_constant(0.0)) return b;
    if (b.is_constant(0.0)) return a;
    return binary(Kind::Add, a, b);
  }
  friend Expression operator-(const Expression& a, const Expression& b) {
    if (a.is_constant() && b.is_constant()) return constant(a.value() - b.value());
    if (b.is_constant(0.0)) return a;
    if (a.is_constant(0.0)) return -b;
    return binary(Kind::Sub, a, b);
  }
  friend Expression operator*(const Expression& a, const Expression& b) {
    if (a.is_constant() && b.is_constant()) return constant(a.value() * b.value());
    if (a.is_constant(0.0) || b.is_constant(0.0)) return constant(0.0);
    if (a.is_constant(1.0)) return b;
    if (b.is_constant(1.0)) return a;
    return binary(Kind::Mul, a, b);
  }
  friend Expression operator/(const Expression& a, const Expression& b) {
    if (a.is_constant() && b.is_constant() && b.value() != 0.0) return constant(a.value() / b.value());
    if (a.is_constant(0.0)) return constant(0.0);
    if (b.is_constant(1.0)) return a;
    return binary(Kind::Div, a, b);
  }
  Expression operator-() const {
    if (is_constant()) return constant(-value());
    if (kind() == Kind::Neg) return Expression(node_->a);
    return Expression(std::make_shared<Node>(Node{Kind::Neg, 0.0, 0, node_, {}}));
  }
  static Expression pow(const Expression& base, const Expression& exponent) {
    if (!exponent.is_constant() || exponent.value() != std::round(exponent.value()))
      throw Error(ErrorCode::NonDifferentiableExpression,
                  "exponent must be an integer constant, got " + exponent.to_string());
    if (exponent.is_constant(0.0)) return constant(1.0);
    if (exponent.is_constant(1.0)) return base;
    if (base.is_constant()) return constant(std::pow(base.value(), exponent.value()));
    return binary(Kind::Pow, base, exponent);
  }
  static Expression sin(const Expression& a) {
    if (a.is_constant()) return constant(std::sin(a.value()));
    return Expression(std::make_shared<Node>(Node{Kind::Sin, 0.0, 0, a.node_, {}}));
  }
  static Expression cos(const Expression& a) {
    if (a.is_constant()) return constant(std::cos(a.value()));
    return Expression(std::make_shared<Node>(Node{Kind::Cos, 0.0, 0, a.node_, {}}));
  }

  /// Parses infix text; identifiers t1..t{n_vars}, `pi`, sin(), cos().
  static Expression parse(const std::string& text, int n_vars);

 private:
  struct Node {
    Kind kind;
    double value;
    int var;
    std::shared_ptr<const Node> a;
    std::shared_ptr<const Node> b;
  };

  explicit Expression(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  static Expression binary(Kind kind, const Expression& a, const Expression& b) {
    return Expression(std::make_shared<Node>(Node{kind, 0.0, 0, a.node_, b.node_}));
  }

  static double eval(const Node& n, std::span<const double> t) {
    switch (n.kind) {
      case Kind::Const: return n.value;
      case Kind::Var: return t[static_cast<std::size_t>(n.var)];
      case Kind::Neg: return -eval(*n.a, t);
      case Kind::Add: return eval(*n.a, t) + eval(*n.b, t);
      case Kind::Sub: return eval(*n.a, t) - eval(*n.b, t);
      case Kind::Mul: return eval(*n.a, t) * eval(*n.b, t);
      case Kind::Div: return eval(*n.a, t) / eval(*n.b, t);
      case Kind::Pow: return std::pow(eval(*n.a, t), n.b->value);
      case Kind::Sin: return std::sin(eval(*n.a, t));
      case Kind::Cos: return std::cos(eval(*n.a, t));
    }
    return 0.0;
  }

  static Expression diff(const Expression& e, int index) {
    const Node& n = *e.node_;
    const Expression a = n.a ? Expression(n.a) : Expression(e.node_);
    const Expression b = n.b ? Expression(n.b) : Expression(e.node_);
    switch (n.kind) {
      case Kind::Const: return constant(0.0);
      case Kind::Var: return constant(n.var == index ? 1.0 : 0.0);
      case Kind::Neg: return -diff(a, index);
      case Kind::Add: return diff(a, index) + diff(b, index);
      case Kind::Sub: return diff(a, index) - diff(b, index);
      case Kind::Mul: return diff(a, index) * b + a * diff(b, index);
      case Kind::Div: return (diff(a, index) * b - a * diff(b, index)) / pow(b, constant(2.0));
      case Kind::Pow: {
        const double p = b.value();
        return constant(p) * pow(a, constant(p - 1.0)) * diff(a, index);
      }
      case Kind::Sin: return cos(a) * diff(a, index);
      case Kind::Cos: return -(sin(a) * diff(a, index));
    }
    return constant(0.0);
  }

  static std::string print(const Node& n) {
    auto num = [](double v) {
      std::string s = std::to_string(v);
      s.erase(s.find_last_not_of('0') + 1);
      if (!s.empty() && s.back() == '.') s.pop_back();
      return s;
    };
    switch (n.kind) {
      case Kind::Const: return n.value < 0 ? "(" + num(n.value) + ")" : num(n.value);
      case Kind::Var: return "t" + std::to_string(n.var + 1);
      case Kind::Neg: return "(-" + print(*n.a) + ")";
      case Kind::Add: return "(" + print(*n.a) + " + " + print(*n.b) + ")";
      case Kind::Sub: return "(" + print(*n.a) + " - " + print(*n.b) + ")";
      case Kind::Mul: return "(" + print(*n.a) + " * " + print(*n.b) + ")";
      case Kind::Div: return "(" + print(*n.a) + " / " + print(*n.b) + ")";
      case Kind::Pow: return "(" + print(*n.a) + " ^ " + print(*n.b) + ")";
      case Kind::Sin: return "sin(" + print(*n.a) + ")";
      case Kind::Cos: return "cos(" + print(*n.a) + ")";
    }
    return "?";
  }

  std::shared_ptr<const Node> node_;
};

namespace detail {

class ExpressionParser {
 public:
  ExpressionParser(const std::string& text, int n_vars) : s_(text), n_vars_(n_vars) {}

  Expression parse() {
    auto e = sum();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorCode::ParseError, msg + " at offset " + std::to_string(pos_) + " in '" + s_ + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Expression sum() {
    auto e = product();
    while (true) {
      if (eat('+')) e = e + product();
      else if (eat('-')) e = e - product();
      else return e;
    }
  }
  Expression product() {
    auto e = unary();
    while (true) {
      if (eat('*')) e = e * unary();
      else if (eat('/')) e = e / unary();
      else return e;
    }
  }
  Expression unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  Expression power() {
    auto base = primary();
    if (eat('^')) return Expression::pow(base, unary());
    return base;
  }
  Expression primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (eat('(')) {
      auto e = sum();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(s_.substr(pos_), &used);
      } catch (const std::exception&) {
        fail("bad number");
      }
      pos_ += used;
      return Expression::constant(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string id = s_.substr(start, pos_ - start);
      if (id == "sin" || id == "cos") {
        if (!eat('(')) fail("expected '(' after " + id);
        auto arg = sum();
        if (!eat(')')) fail("expected ')'");
        return id == "sin" ? Expression::sin(arg) : Expression::cos(arg);
      }
      if (id == "pi") return Expression::constant(std::numbers::pi);
      if (id.size() > 1 && id[0] == 't' && id.find_first_not_of("0123456789", 1) == std::string::npos) {
        const int k = std::stoi(id.substr(1));
        if (k < 1 || k > n_vars_) fail("variable " + id + " outside t1..t" + std::to_string(n_vars_));
        return Expression::variable(k - 1);
      }
      fail("unknown identifier '" + id + "'");
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::string s_;
  int n_vars_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Expression Expression::parse(const std::string& text, int n_vars) {
  return detail::ExpressionParser(text, n_vars).parse();
}

}  // namespace synclab
