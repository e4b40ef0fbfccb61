#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace closure {

/// Values of the free variables t, x, y, z.
struct Bindings {
  double t = 0.0, x = 0.0, y = 0.0, z = 0.0;
};

/// Immutable arithmetic expression over t, x, y, z and the constant pi.
///
/// Grammar (loosest first): + −, then * /, then unary −, then right-associative ^.
/// Functions: sin cos tan exp log sqrt sinh cosh tanh abs.
class Expression {
 public:
  enum class Kind { Number, Variable, Pi, Add, Sub, Mul, Div, Pow, Neg, Call };
  enum class Var { T, X, Y, Z };
  enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh, Tanh, Abs };

  struct Node {
    Kind kind = Kind::Number;
    double value = 0.0;
    Var var = Var::T;
    Func func = Func::Sin;
    std::shared_ptr<const Node> lhs, rhs;  // unary nodes and calls use lhs
  };
  using NodePtr = std::shared_ptr<const Node>;

  Expression();  // the number 0
  explicit Expression(NodePtr root) : root_(std::move(root)) {}

  /// Throws Syntax (byte offset and expected tokens) or UnknownIdentifier.
  static Expression parse(std::string_view text);
  static Expression number(double v);

  /// Throws EvaluationDomain on division by zero, log/sqrt outside their
  /// domain, or any non-finite intermediate.
  double eval(const Bindings& b) const;

  /// Minimal-parenthesis text; numbers use the shortest round-trip form, so
  /// parse(print(parse(s))) reproduces parse(s) node for node.
  std::string print() const;

  /// Folds finite constant subtrees and the identities x+0, x−0, 0−x, x·1,
  /// x·0, x/1, x^1, x^0, −(−x). Idempotent.
  Expression normalize() const;

  /// Symbolic partial derivative, normalized.
  Expression derivative(Var v) const;

  bool depends_on(Var v) const;
  const NodePtr& root() const noexcept { return root_; }

  friend bool operator==(const Expression& a, const Expression& b);

 private:
  NodePtr root_;
};

const char* to_string(Expression::Func f) noexcept;

}  // namespace closure
