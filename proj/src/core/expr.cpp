#include "core/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <utility>
#include <vector>

namespace tsep {

struct Expr::Node {
  Kind kind;
  double number = 0.0;
  std::string name;
  Func func = Func::Sin;
  int exponent = 0;
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

bool is_number(const Expr& e, double v) {
  return e.kind() == Expr::Kind::Number && e.number_value() == v;
}

}  // namespace

Expr Expr::number(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Number;
  n->number = (value == 0.0) ? 0.0 : value;  // canonicalize -0
  return Expr(std::move(n));
}

Expr Expr::variable(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Variable;
  n->name = std::move(name);
  return Expr(std::move(n));
}

Expr Expr::negate(Expr a) {
  if (a.kind() == Kind::Number) return number(-a.number_value());
  if (a.kind() == Kind::Negate) return a.left();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Negate;
  n->a = a.node_;
  return Expr(std::move(n));
}

Expr Expr::add(Expr a, Expr b) {
  if (a.kind() == Kind::Number && b.kind() == Kind::Number) {
    return number(a.number_value() + b.number_value());
  }
  if (is_number(a, 0.0)) return b;
  if (is_number(b, 0.0)) return a;
  auto n = std::make_shared<Node>();
  n->kind = Kind::Add;
  n->a = a.node_;
  n->b = b.node_;
  return Expr(std::move(n));
}

Expr Expr::sub(Expr a, Expr b) {
  if (a.kind() == Kind::Number && b.kind() == Kind::Number) {
    return number(a.number_value() - b.number_value());
  }
  if (is_number(b, 0.0)) return a;
  if (is_number(a, 0.0)) return negate(b);
  auto n = std::make_shared<Node>();
  n->kind = Kind::Sub;
  n->a = a.node_;
  n->b = b.node_;
  return Expr(std::move(n));
}

Expr Expr::mul(Expr a, Expr b) {
  if (a.kind() == Kind::Number && b.kind() == Kind::Number) {
    return number(a.number_value() * b.number_value());
  }
  if (is_number(a, 0.0) || is_number(b, 0.0)) return number(0.0);
  if (is_number(a, 1.0)) return b;
  if (is_number(b, 1.0)) return a;
  auto n = std::make_shared<Node>();
  n->kind = Kind::Mul;
  n->a = a.node_;
  n->b = b.node_;
  return Expr(std::move(n));
}

Expr Expr::div(Expr a, Expr b) {
  if (is_number(a, 0.0) && !is_number(b, 0.0)) return number(0.0);
  if (is_number(b, 1.0)) return a;
  if (a.kind() == Kind::Number && b.kind() == Kind::Number &&
      b.number_value() != 0.0) {
    const double q = a.number_value() / b.number_value();
    if (std::isfinite(q)) return number(q);
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Div;
  n->a = a.node_;
  n->b = b.node_;
  return Expr(std::move(n));
}

Expr Expr::pow(Expr base, int exponent) {
  if (exponent == 0) return number(1.0);
  if (exponent == 1) return base;
  if (base.kind() == Kind::Number) {
    const double v = std::pow(base.number_value(), exponent);
    if (std::isfinite(v)) return number(v);
  }
  auto n = std::make_shared<Node>();
  n->kind = Kind::Pow;
  n->exponent = exponent;
  n->a = base.node_;
  return Expr(std::move(n));
}

Expr Expr::call(Func f, Expr arg) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Call;
  n->func = f;
  n->a = arg.node_;
  return Expr(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }
double Expr::number_value() const { return node_->number; }
const std::string& Expr::name() const { return node_->name; }
Expr::Func Expr::func() const { return node_->func; }
int Expr::exponent() const { return node_->exponent; }
Expr Expr::left() const { return Expr(node_->a); }
Expr Expr::right() const { return Expr(node_->b); }

const char* func_name(Expr::Func f) {
  switch (f) {
    case Expr::Func::Sin: return "sin";
    case Expr::Func::Cos: return "cos";
    case Expr::Func::Tan: return "tan";
    case Expr::Func::Exp: return "exp";
    case Expr::Func::Log: return "log";
    case Expr::Func::Sqrt: return "sqrt";
    case Expr::Func::Sinh: return "sinh";
    case Expr::Func::Cosh: return "cosh";
    case Expr::Func::Tanh: return "tanh";
    case Expr::Func::Abs: return "abs";
  }
  return "?";
}

namespace {

double eval_node(const Expr::Node& n, const Binding& vars);

double eval_call(Expr::Func f, double x) {
  switch (f) {
    case Expr::Func::Sin: return std::sin(x);
    case Expr::Func::Cos: return std::cos(x);
    case Expr::Func::Tan: return std::tan(x);
    case Expr::Func::Exp: return std::exp(x);
    case Expr::Func::Log:
      if (x <= 0.0) {
        fail(ErrorCode::MathDomain,
             "log of non-positive value " + format_number(x));
      }
      return std::log(x);
    case Expr::Func::Sqrt:
      if (x < 0.0) {
        fail(ErrorCode::MathDomain,
             "sqrt of negative value " + format_number(x));
      }
      return std::sqrt(x);
    case Expr::Func::Sinh: return std::sinh(x);
    case Expr::Func::Cosh: return std::cosh(x);
    case Expr::Func::Tanh: return std::tanh(x);
    case Expr::Func::Abs: return std::abs(x);
  }
  fail(ErrorCode::Internal, "unknown function");
}

double eval_node(const Expr::Node& n, const Binding& vars) {
  using Kind = Expr::Kind;
  switch (n.kind) {
    case Kind::Number:
      return n.number;
    case Kind::Variable: {
      if (n.name == "pi") return M_PI;
      if (n.name == "e") return M_E;
      auto it = vars.find(n.name);
      if (it == vars.end()) {
        fail(ErrorCode::UnboundVariable, "unbound variable '" + n.name + "'");
      }
      return it->second;
    }
    case Kind::Negate:
      return -eval_node(*n.a, vars);
    case Kind::Add:
      return eval_node(*n.a, vars) + eval_node(*n.b, vars);
    case Kind::Sub:
      return eval_node(*n.a, vars) - eval_node(*n.b, vars);
    case Kind::Mul:
      return eval_node(*n.a, vars) * eval_node(*n.b, vars);
    case Kind::Div: {
      const double num = eval_node(*n.a, vars);
      const double den = eval_node(*n.b, vars);
      if (den == 0.0) fail(ErrorCode::MathDomain, "division by zero");
      return num / den;
    }
    case Kind::Pow: {
      const double base = eval_node(*n.a, vars);
      if (base == 0.0 && n.exponent < 0) {
        fail(ErrorCode::MathDomain, "zero raised to a negative power");
      }
      return std::pow(base, n.exponent);
    }
    case Kind::Call:
      return eval_call(n.func, eval_node(*n.a, vars));
  }
  fail(ErrorCode::Internal, "unknown node kind");
}

}  // namespace

double Expr::eval(const Binding& vars) const {
  const double v = eval_node(*node_, vars);
  if (!std::isfinite(v)) {
    fail(ErrorCode::MathDomain, "expression evaluated to a non-finite value");
  }
  return v;
}

namespace {

// Precedence levels used for printing: additive 1, multiplicative 2,
// unary 3, power 4, atom 5.
int print_prec(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
      return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div:
      return 2;
    case Expr::Kind::Negate:
      return 3;
    case Expr::Kind::Number:
      return e.number_value() < 0.0 ? 3 : 5;  // "-2" reads as a unary
    case Expr::Kind::Pow:
      return 4;
    case Expr::Kind::Variable:
    case Expr::Kind::Call:
      return 5;
  }
  return 5;
}

void print_node(const Expr& e, int min_prec, std::string& out) {
  const bool parens = print_prec(e) < min_prec;
  if (parens) out += '(';
  switch (e.kind()) {
    case Expr::Kind::Number:
      out += format_number(e.number_value());
      break;
    case Expr::Kind::Variable:
      out += e.name();
      break;
    case Expr::Kind::Negate:
      out += '-';
      print_node(e.left(), 3, out);
      break;
    case Expr::Kind::Add:
      print_node(e.left(), 1, out);
      out += " + ";
      print_node(e.right(), 2, out);
      break;
    case Expr::Kind::Sub:
      print_node(e.left(), 1, out);
      out += " - ";
      print_node(e.right(), 2, out);
      break;
    case Expr::Kind::Mul:
      print_node(e.left(), 2, out);
      out += '*';
      print_node(e.right(), 3, out);
      break;
    case Expr::Kind::Div:
      print_node(e.left(), 2, out);
      out += '/';
      print_node(e.right(), 3, out);
      break;
    case Expr::Kind::Pow: {
      print_node(e.left(), 5, out);
      out += '^';
      const int n = e.exponent();
      out += std::to_string(n);
      break;
    }
    case Expr::Kind::Call:
      out += func_name(e.func());
      out += '(';
      print_node(e.left(), 0, out);
      out += ')';
      break;
  }
  if (parens) out += ')';
}

}  // namespace

std::string Expr::str() const {
  std::string out;
  print_node(*this, 0, out);
  return out;
}

bool Expr::operator==(const Expr& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case Kind::Number:
      return number_value() == other.number_value();
    case Kind::Variable:
      return name() == other.name();
    case Kind::Negate:
      return Expr(node_->a) == Expr(other.node_->a);
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div:
      return Expr(node_->a) == Expr(other.node_->a) &&
             Expr(node_->b) == Expr(other.node_->b);
    case Kind::Pow:
      return exponent() == other.exponent() &&
             Expr(node_->a) == Expr(other.node_->a);
    case Kind::Call:
      return func() == other.func() && Expr(node_->a) == Expr(other.node_->a);
  }
  return false;
}

namespace {

void collect_free(const Expr& e, std::set<std::string>& out) {
  switch (e.kind()) {
    case Expr::Kind::Number:
      return;
    case Expr::Kind::Variable:
      if (e.name() != "pi" && e.name() != "e") out.insert(e.name());
      return;
    case Expr::Kind::Negate:
    case Expr::Kind::Pow:
    case Expr::Kind::Call:
      collect_free(e.left(), out);
      return;
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
    case Expr::Kind::Mul:
    case Expr::Kind::Div:
      collect_free(e.left(), out);
      collect_free(e.right(), out);
      return;
  }
}

}  // namespace

std::set<std::string> Expr::free_variables() const {
  std::set<std::string> out;
  collect_free(*this, out);
  return out;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

struct Parser {
  std::string_view src;
  size_t pos = 0;

  [[noreturn]] void syntax_error(size_t at, const std::string& expected) {
    fail(ErrorCode::SyntaxError,
         "syntax error at offset " + std::to_string(at) + ": " + expected);
  }

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) {
      ++pos;
    }
  }

  bool peek_is(char c) {
    skip_ws();
    return pos < src.size() && src[pos] == c;
  }

  bool consume(char c) {
    if (peek_is(c)) {
      ++pos;
      return true;
    }
    return false;
  }

  Expr parse() {
    Expr e = parse_expr();
    skip_ws();
    if (pos != src.size()) {
      syntax_error(pos, "unexpected trailing input");
    }
    return e;
  }

  Expr parse_expr() {
    Expr e = parse_term();
    for (;;) {
      if (consume('+')) {
        e = Expr::add(e, parse_term());
      } else if (consume('-')) {
        e = Expr::sub(e, parse_term());
      } else {
        return e;
      }
    }
  }

  Expr parse_term() {
    Expr e = parse_unary();
    for (;;) {
      if (consume('*')) {
        e = Expr::mul(e, parse_unary());
      } else if (consume('/')) {
        e = Expr::div(e, parse_unary());
      } else {
        return e;
      }
    }
  }

  Expr parse_unary() {
    if (consume('-')) {
      Expr inner = parse_unary();
      // Fold a negated literal into the literal so "-2" prints back as
      // itself.
      if (inner.kind() == Expr::Kind::Number) {
        return Expr::number(-inner.number_value());
      }
      return Expr::negate(inner);
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    skip_ws();
    if (consume('^')) {
      skip_ws();
      const size_t exp_at = pos;
      Expr exp = parse_unary();  // right-associative via recursion
      double v;
      try {
        v = exp.eval({});
      } catch (const Error&) {
        syntax_error(exp_at, "exponent must be a constant integer");
      }
      if (!(std::abs(v) < 1e9) || v != std::nearbyint(v)) {
        syntax_error(exp_at, "exponent must be a constant integer");
      }
      return Expr::pow(base, static_cast<int>(v));
    }
    return base;
  }

  Expr parse_atom() {
    skip_ws();
    if (pos >= src.size()) {
      syntax_error(pos, "expected a number, name, or '('");
    }
    const char c = src[pos];
    if (c == '(') {
      ++pos;
      Expr e = parse_expr();
      if (!consume(')')) {
        syntax_error(pos, "expected ')'");
      }
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return parse_number();
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      return parse_name();
    }
    syntax_error(pos, std::string("unexpected character '") + c + "'");
  }

  Expr parse_number() {
    const size_t start = pos;
    while (pos < src.size() &&
           std::isdigit(static_cast<unsigned char>(src[pos]))) {
      ++pos;
    }
    if (pos < src.size() && src[pos] == '.') {
      ++pos;
      while (pos < src.size() &&
             std::isdigit(static_cast<unsigned char>(src[pos]))) {
        ++pos;
      }
    }
    if (pos < src.size() && (src[pos] == 'e' || src[pos] == 'E')) {
      size_t mark = pos;
      ++pos;
      if (pos < src.size() && (src[pos] == '+' || src[pos] == '-')) ++pos;
      if (pos < src.size() &&
          std::isdigit(static_cast<unsigned char>(src[pos]))) {
        while (pos < src.size() &&
               std::isdigit(static_cast<unsigned char>(src[pos]))) {
          ++pos;
        }
      } else {
        pos = mark;  // "2e" is the number 2 followed by the name e
      }
    }
    const std::string text(src.substr(start, pos - start));
    if (text == ".") syntax_error(start, "expected a number");
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size() || !std::isfinite(v)) {
      syntax_error(start, "invalid number '" + text + "'");
    }
    return Expr::number(v);
  }

  Expr parse_name() {
    const size_t start = pos;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) ||
            src[pos] == '_')) {
      ++pos;
    }
    std::string name(src.substr(start, pos - start));
    if (peek_is('(')) {
      static const std::map<std::string, Expr::Func> kFuncs = {
          {"sin", Expr::Func::Sin},   {"cos", Expr::Func::Cos},
          {"tan", Expr::Func::Tan},   {"exp", Expr::Func::Exp},
          {"log", Expr::Func::Log},   {"sqrt", Expr::Func::Sqrt},
          {"sinh", Expr::Func::Sinh}, {"cosh", Expr::Func::Cosh},
          {"tanh", Expr::Func::Tanh}, {"abs", Expr::Func::Abs},
      };
      auto it = kFuncs.find(name);
      if (it == kFuncs.end()) {
        fail(ErrorCode::UnknownFunction,
             "unknown function '" + name + "' at offset " +
                 std::to_string(start));
      }
      consume('(');
      Expr arg = parse_expr();
      if (!consume(')')) {
        syntax_error(pos, "expected ')' closing call to '" + name + "'");
      }
      return Expr::call(it->second, arg);
    }
    return Expr::variable(std::move(name));
  }
};

}  // namespace

Expr parse_expression(std::string_view source) {
  Parser p{source};
  return p.parse();
}

// ---------------------------------------------------------------------------
// Differentiation
// ---------------------------------------------------------------------------

Expr differentiate(const Expr& e, const std::string& var) {
  using Kind = Expr::Kind;
  using Func = Expr::Func;
  switch (e.kind()) {
    case Kind::Number:
      return Expr::number(0.0);
    case Kind::Variable:
      return Expr::number(e.name() == var ? 1.0 : 0.0);
    case Kind::Negate:
      return Expr::negate(differentiate(e.left(), var));
    case Kind::Add:
      return Expr::add(differentiate(e.left(), var),
                       differentiate(e.right(), var));
    case Kind::Sub:
      return Expr::sub(differentiate(e.left(), var),
                       differentiate(e.right(), var));
    case Kind::Mul:
      return Expr::add(
          Expr::mul(differentiate(e.left(), var), e.right()),
          Expr::mul(e.left(), differentiate(e.right(), var)));
    case Kind::Div:
      return Expr::div(
          Expr::sub(Expr::mul(differentiate(e.left(), var), e.right()),
                    Expr::mul(e.left(), differentiate(e.right(), var))),
          Expr::pow(e.right(), 2));
    case Kind::Pow: {
      const int n = e.exponent();
      return Expr::mul(
          Expr::mul(Expr::number(n), Expr::pow(e.left(), n - 1)),
          differentiate(e.left(), var));
    }
    case Kind::Call: {
      const Expr u = e.left();
      const Expr du = differentiate(u, var);
      switch (e.func()) {
        case Func::Sin:
          return Expr::mul(Expr::call(Func::Cos, u), du);
        case Func::Cos:
          return Expr::negate(Expr::mul(Expr::call(Func::Sin, u), du));
        case Func::Tan:
          return Expr::mul(
              Expr::add(Expr::number(1.0), Expr::pow(Expr::call(Func::Tan, u), 2)),
              du);
        case Func::Exp:
          return Expr::mul(Expr::call(Func::Exp, u), du);
        case Func::Log:
          return Expr::div(du, u);
        case Func::Sqrt:
          return Expr::div(
              du, Expr::mul(Expr::number(2.0), Expr::call(Func::Sqrt, u)));
        case Func::Sinh:
          return Expr::mul(Expr::call(Func::Cosh, u), du);
        case Func::Cosh:
          return Expr::mul(Expr::call(Func::Sinh, u), du);
        case Func::Tanh:
          return Expr::mul(
              Expr::sub(Expr::number(1.0),
                        Expr::pow(Expr::call(Func::Tanh, u), 2)),
              du);
        case Func::Abs:
          // d|u| = u/|u| * du away from u = 0.
          return Expr::mul(Expr::div(u, Expr::call(Func::Abs, u)), du);
      }
      fail(ErrorCode::Internal, "unknown function");
    }
  }
  fail(ErrorCode::Internal, "unknown node kind");
}

Expr substitute(const Expr& e, const std::string& var,
                const Expr& replacement) {
  using Kind = Expr::Kind;
  switch (e.kind()) {
    case Kind::Number:
      return e;
    case Kind::Variable:
      return e.name() == var ? replacement : e;
    case Kind::Negate:
      return Expr::negate(substitute(e.left(), var, replacement));
    case Kind::Add:
      return Expr::add(substitute(e.left(), var, replacement),
                       substitute(e.right(), var, replacement));
    case Kind::Sub:
      return Expr::sub(substitute(e.left(), var, replacement),
                       substitute(e.right(), var, replacement));
    case Kind::Mul:
      return Expr::mul(substitute(e.left(), var, replacement),
                       substitute(e.right(), var, replacement));
    case Kind::Div:
      return Expr::div(substitute(e.left(), var, replacement),
                       substitute(e.right(), var, replacement));
    case Kind::Pow:
      return Expr::pow(substitute(e.left(), var, replacement), e.exponent());
    case Kind::Call:
      return Expr::call(e.func(), substitute(e.left(), var, replacement));
  }
  fail(ErrorCode::Internal, "unknown node kind");
}

}  // namespace tsep
