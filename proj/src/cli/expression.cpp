#include "closure/cli/expression.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <optional>

#include "closure/error.hpp"

namespace closure {

namespace {

using Kind = Expression::Kind;
using Var = Expression::Var;
using Func = Expression::Func;
using Node = Expression::Node;
using NodePtr = Expression::NodePtr;

constexpr std::array<std::pair<std::string_view, Func>, 10> kFunctions{{{"sin", Func::Sin},
                                                                       {"cos", Func::Cos},
                                                                       {"tan", Func::Tan},
                                                                       {"exp", Func::Exp},
                                                                       {"log", Func::Log},
                                                                       {"sqrt", Func::Sqrt},
                                                                       {"sinh", Func::Sinh},
                                                                       {"cosh", Func::Cosh},
                                                                       {"tanh", Func::Tanh},
                                                                       {"abs", Func::Abs}}};

NodePtr make_number(double v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Number;
  n->value = v;
  return n;
}
NodePtr make_var(Var v) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->var = v;
  return n;
}
NodePtr make_pi() {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Pi;
  return n;
}
NodePtr make_binary(Kind k, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}
NodePtr make_neg(NodePtr a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Neg;
  n->lhs = std::move(a);
  return n;
}
NodePtr make_call(Func f, NodePtr a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Call;
  n->func = f;
  n->lhs = std::move(a);
  return n;
}

std::string token_at(std::string_view s, std::size_t pos) {
  if (pos >= s.size()) return "end of input";
  return "'" + std::string(1, s[pos]) + "'";
}

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  NodePtr parse_all() {
    skip();
    if (pos_ >= s_.size()) fail("a number, identifier, '(' or '-'");
    NodePtr e = additive();
    skip();
    if (pos_ < s_.size()) fail("an operator or end of input");
    return e;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& expected) const {
    throw Error(ErrorKind::Syntax, "syntax error at byte " + std::to_string(pos_) + ": expected " + expected +
                                       ", found " + token_at(s_, pos_));
  }

  void skip() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' || s_[pos_] == '\r'))
      ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr additive() {
    NodePtr lhs = multiplicative();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(Kind::Add, lhs, multiplicative());
      } else if (accept('-')) {
        lhs = make_binary(Kind::Sub, lhs, multiplicative());
      } else {
        return lhs;
      }
    }
  }

  NodePtr multiplicative() {
    NodePtr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(Kind::Mul, lhs, unary());
      } else if (accept('/')) {
        lhs = make_binary(Kind::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make_neg(unary());
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return make_binary(Kind::Pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("a number, identifier, '(' or '-'");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = additive();
      if (!accept(')')) fail("')' or an operator");
      return e;
    }
    if ((c >= '0' && c <= '9') || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("a number, identifier, '(' or '-'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < s_.size() && s_[pos_] >= '0' && s_[pos_] <= '9') ++pos_, ++n;
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < s_.size() && s_[pos_] == '.') {
      ++pos_;
      mantissa += digits();
    }
    if (mantissa == 0) {
      pos_ = start;
      fail("a digit");
    }
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (digits() == 0) fail("exponent digits");
    }
    double v = 0.0;
    const auto res = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (res.ec != std::errc() || !std::isfinite(v)) {
      pos_ = start;
      fail("a finite number");
    }
    return make_number(v);
  }

  NodePtr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    const std::string_view name = s_.substr(start, pos_ - start);
    if (name == "t") return make_var(Var::T);
    if (name == "x") return make_var(Var::X);
    if (name == "y") return make_var(Var::Y);
    if (name == "z") return make_var(Var::Z);
    if (name == "pi") return make_pi();
    for (const auto& [fname, f] : kFunctions) {
      if (name == fname) {
        if (!accept('(')) fail("'(' after function name");
        NodePtr arg = additive();
        if (!accept(')')) fail("')' or an operator");
        return make_call(f, arg);
      }
    }
    throw Error(ErrorKind::UnknownIdentifier,
                "unknown identifier '" + std::string(name) + "' at byte " + std::to_string(start));
  }
};

[[noreturn]] void domain_error(const std::string& what) { throw Error(ErrorKind::EvaluationDomain, what); }

double checked(double v, const char* what) {
  if (!std::isfinite(v)) domain_error(std::string("non-finite result of ") + what);
  return v;
}

double eval_node(const Node& n, const Bindings& b) {
  switch (n.kind) {
    case Kind::Number: return n.value;
    case Kind::Pi: return std::numbers::pi;
    case Kind::Variable:
      switch (n.var) {
        case Var::T: return b.t;
        case Var::X: return b.x;
        case Var::Y: return b.y;
        case Var::Z: return b.z;
      }
      return 0.0;
    case Kind::Neg: return -eval_node(*n.lhs, b);
    case Kind::Add: return checked(eval_node(*n.lhs, b) + eval_node(*n.rhs, b), "+");
    case Kind::Sub: return checked(eval_node(*n.lhs, b) - eval_node(*n.rhs, b), "-");
    case Kind::Mul: return checked(eval_node(*n.lhs, b) * eval_node(*n.rhs, b), "*");
    case Kind::Div: {
      const double num = eval_node(*n.lhs, b);
      const double den = eval_node(*n.rhs, b);
      if (den == 0.0) domain_error("division by zero");
      return checked(num / den, "/");
    }
    case Kind::Pow: return checked(std::pow(eval_node(*n.lhs, b), eval_node(*n.rhs, b)), "^");
    case Kind::Call: {
      const double a = eval_node(*n.lhs, b);
      switch (n.func) {
        case Func::Sin: return std::sin(a);
        case Func::Cos: return std::cos(a);
        case Func::Tan: return checked(std::tan(a), "tan");
        case Func::Exp: return checked(std::exp(a), "exp");
        case Func::Log:
          if (!(a > 0.0)) domain_error("log of non-positive argument " + std::to_string(a));
          return std::log(a);
        case Func::Sqrt:
          if (a < 0.0) domain_error("sqrt of negative argument " + std::to_string(a));
          return std::sqrt(a);
        case Func::Sinh: return checked(std::sinh(a), "sinh");
        case Func::Cosh: return checked(std::cosh(a), "cosh");
        case Func::Tanh: return std::tanh(a);
        case Func::Abs: return std::fabs(a);
      }
  }
  }
  return 0.0;
}

// Binding strength used to place parentheses: sums 1, products 2, negation 3,
// powers 4, atoms 5. Negative literals bind like negation.
int precedence(const Node& n) {
  switch (n.kind) {
    case Kind::Add:
    case Kind::Sub: return 1;
    case Kind::Mul:
    case Kind::Div: return 2;
    case Kind::Neg: return 3;
    case Kind::Pow: return 4;
    case Kind::Number: return std::signbit(n.value) ? 3 : 5;
    default: return 5;
  }
}

void print_node(const Node& n, std::string& out);

void print_child(const Node& child, int min_prec, std::string& out) {
  if (precedence(child) < min_prec) {
    out += '(';
    print_node(child, out);
    out += ')';
  } else {
    print_node(child, out);
  }
}

void print_node(const Node& n, std::string& out) {
  switch (n.kind) {
    case Kind::Number: {
      char buf[64];
      const auto res = std::to_chars(buf, buf + sizeof buf, n.value);
      out.append(buf, res.ptr);
      return;
    }
    case Kind::Pi: out += "pi"; return;
    case Kind::Variable: out += "txyz"[static_cast<int>(n.var)]; return;
    case Kind::Neg:
      out += '-';
      print_child(*n.lhs, 3, out);
      return;
    case Kind::Call:
      out += to_string(n.func);
      out += '(';
      print_node(*n.lhs, out);
      out += ')';
      return;
    case Kind::Pow:
      print_child(*n.lhs, 5, out);
      out += '^';
      print_child(*n.rhs, 3, out);
      return;
    default: {
      const int p = precedence(n);
      print_child(*n.lhs, p, out);
      out += n.kind == Kind::Add ? " + " : n.kind == Kind::Sub ? " - " : n.kind == Kind::Mul ? "*" : "/";
      // Same-precedence right operands keep their grouping.
      print_child(*n.rhs, p + 1, out);
    }
  }
}

bool is_number(const NodePtr& n, double v) { return n->kind == Kind::Number && n->value == v; }
bool is_number(const NodePtr& n) { return n->kind == Kind::Number; }

std::optional<double> fold(const Node& n) {
  try {
    const double v = eval_node(n, Bindings{});
    if (std::isfinite(v)) return v;
  } catch (const Error&) {
  }
  return std::nullopt;
}

NodePtr simplify(const NodePtr& n);

// Applies the rewrite rules to a node whose children are already simplified.
NodePtr rewrite(const NodePtr& n) {
  switch (n->kind) {
    case Kind::Neg:
      if (is_number(n->lhs)) return make_number(-n->lhs->value);
      if (n->lhs->kind == Kind::Neg) return n->lhs->lhs;
      return n;
    case Kind::Call:
      if (is_number(n->lhs))
        if (auto v = fold(*n)) return make_number(*v);
      return n;
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div:
    case Kind::Pow: {
      const NodePtr& a = n->lhs;
      const NodePtr& b = n->rhs;
      if (is_number(a) && is_number(b))
        if (auto v = fold(*n)) return make_number(*v);
      switch (n->kind) {
        case Kind::Add:
          if (is_number(b, 0.0)) return a;
          if (is_number(a, 0.0)) return b;
          break;
        case Kind::Sub:
          if (is_number(b, 0.0)) return a;
          if (is_number(a, 0.0)) return rewrite(make_neg(b));
          break;
        case Kind::Mul:
          if (is_number(a, 0.0) || is_number(b, 0.0)) return make_number(0.0);
          if (is_number(b, 1.0)) return a;
          if (is_number(a, 1.0)) return b;
          break;
        case Kind::Div:
          if (is_number(b, 1.0)) return a;
          break;
        case Kind::Pow:
          if (is_number(b, 1.0)) return a;
          if (is_number(b, 0.0)) return make_number(1.0);
          break;
        default: break;
      }
      return n;
    }
    default: return n;
  }
}

NodePtr simplify(const NodePtr& n) {
  switch (n->kind) {
    case Kind::Number:
    case Kind::Variable:
    case Kind::Pi: return n;
    case Kind::Neg: return rewrite(make_neg(simplify(n->lhs)));
    case Kind::Call: return rewrite(make_call(n->func, simplify(n->lhs)));
    default: return rewrite(make_binary(n->kind, simplify(n->lhs), simplify(n->rhs)));
  }
}

bool depends(const Node& n, Var v) {
  switch (n.kind) {
    case Kind::Number:
    case Kind::Pi: return false;
    case Kind::Variable: return n.var == v;
    case Kind::Neg:
    case Kind::Call: return depends(*n.lhs, v);
    default: return depends(*n.lhs, v) || depends(*n.rhs, v);
  }
}

NodePtr mul(NodePtr a, NodePtr b) { return make_binary(Kind::Mul, std::move(a), std::move(b)); }
NodePtr div(NodePtr a, NodePtr b) { return make_binary(Kind::Div, std::move(a), std::move(b)); }

NodePtr diff(const NodePtr& n, Var v) {
  if (!depends(*n, v)) return make_number(0.0);
  const NodePtr& a = n->lhs;
  const NodePtr& b = n->rhs;
  switch (n->kind) {
    case Kind::Variable: return make_number(1.0);
    case Kind::Neg: return make_neg(diff(a, v));
    case Kind::Add: return make_binary(Kind::Add, diff(a, v), diff(b, v));
    case Kind::Sub: return make_binary(Kind::Sub, diff(a, v), diff(b, v));
    case Kind::Mul: return make_binary(Kind::Add, mul(diff(a, v), b), mul(a, diff(b, v)));
    case Kind::Div:
      return div(make_binary(Kind::Sub, mul(diff(a, v), b), mul(a, diff(b, v))),
                 make_binary(Kind::Pow, b, make_number(2.0)));
    case Kind::Pow:
      if (!depends(*b, v))
        return mul(mul(b, make_binary(Kind::Pow, a, make_binary(Kind::Sub, b, make_number(1.0)))), diff(a, v));
      return mul(n, make_binary(Kind::Add, mul(diff(b, v), make_call(Func::Log, a)), div(mul(b, diff(a, v)), a)));
    case Kind::Call: {
      const NodePtr da = diff(a, v);
      switch (n->func) {
        case Func::Sin: return mul(make_call(Func::Cos, a), da);
        case Func::Cos: return mul(make_neg(make_call(Func::Sin, a)), da);
        case Func::Tan: return div(da, make_binary(Kind::Pow, make_call(Func::Cos, a), make_number(2.0)));
        case Func::Exp: return mul(n, da);
        case Func::Log: return div(da, a);
        case Func::Sqrt: return div(da, mul(make_number(2.0), n));
        case Func::Sinh: return mul(make_call(Func::Cosh, a), da);
        case Func::Cosh: return mul(make_call(Func::Sinh, a), da);
        case Func::Tanh: return div(da, make_binary(Kind::Pow, make_call(Func::Cosh, a), make_number(2.0)));
        case Func::Abs: return mul(div(a, n), da);
      }
    }
      [[fallthrough]];
    default: return make_number(0.0);
  }
}

bool equal(const Node& a, const Node& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Kind::Number: return a.value == b.value && std::signbit(a.value) == std::signbit(b.value);
    case Kind::Pi: return true;
    case Kind::Variable: return a.var == b.var;
    case Kind::Neg: return equal(*a.lhs, *b.lhs);
    case Kind::Call: return a.func == b.func && equal(*a.lhs, *b.lhs);
    default: return equal(*a.lhs, *b.lhs) && equal(*a.rhs, *b.rhs);
  }
}

}  // namespace

const char* to_string(Expression::Func f) noexcept {
  for (const auto& [name, g] : kFunctions)
    if (g == f) return name.data();
  return "?";
}

Expression::Expression() : root_(make_number(0.0)) {}

Expression Expression::parse(std::string_view text) { return Expression(Parser(text).parse_all()); }

Expression Expression::number(double v) { return Expression(make_number(v)); }

double Expression::eval(const Bindings& b) const { return eval_node(*root_, b); }

std::string Expression::print() const {
  std::string out;
  print_node(*root_, out);
  return out;
}

Expression Expression::normalize() const { return Expression(simplify(root_)); }

Expression Expression::derivative(Var v) const { return Expression(simplify(diff(root_, v))); }

bool Expression::depends_on(Var v) const { return depends(*root_, v); }

bool operator==(const Expression& a, const Expression& b) { return equal(*a.root_, *b.root_); }

}  // namespace closure
