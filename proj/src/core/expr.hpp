#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>

#include "core/error.hpp"

namespace tsep {

// Variable bindings for evaluation. The constants pi and e are built in
// and cannot be rebound.
using Binding = std::map<std::string, double>;

// Immutable expression AST. Copies are cheap (shared nodes).
//
// Grammar (full EBNF in docs/expression-grammar.md):
//   expr   = term { ("+" | "-") term }
//   term   = unary { ("*" | "/") unary }
//   unary  = "-" unary | power
//   power  = atom [ "^" exponent ]          (exponent: constant integer)
//   atom   = number | name | name "(" expr ")" | "(" expr ")"
class Expr {
 public:
  enum class Kind {
    Number,
    Variable,
    Negate,
    Add,
    Sub,
    Mul,
    Div,
    Pow,   // integer exponent
    Call,
  };

  enum class Func { Sin, Cos, Tan, Exp, Log, Sqrt, Sinh, Cosh, Tanh, Abs };

  struct Node;  // defined in expr.cpp

  Expr() : Expr(number(0.0)) {}

  static Expr number(double value);
  static Expr variable(std::string name);

  // Factories with light simplification (constant folding, neutral and
  // absorbing elements). All building goes through these so simplified
  // shape is uniform between the parser and the differentiator.
  static Expr negate(Expr a);
  static Expr add(Expr a, Expr b);
  static Expr sub(Expr a, Expr b);
  static Expr mul(Expr a, Expr b);
  static Expr div(Expr a, Expr b);
  static Expr pow(Expr base, int exponent);
  static Expr call(Func f, Expr arg);

  Kind kind() const;
  double number_value() const;        // Kind::Number
  const std::string& name() const;    // Kind::Variable
  Func func() const;                  // Kind::Call
  int exponent() const;               // Kind::Pow
  Expr left() const;                  // first child
  Expr right() const;                 // second child (binary only)

  double eval(const Binding& vars) const;
  std::string str() const;

  // Structural equality (numbers compare bitwise-as-values).
  bool operator==(const Expr& other) const;

  // Free variables, excluding the built-in constants pi and e.
  std::set<std::string> free_variables() const;

 private:
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

// Parses source text. Throws SyntaxError (with byte offset in the
// message) or UnknownFunction.
Expr parse_expression(std::string_view source);

// Exact symbolic derivative with light simplification.
Expr differentiate(const Expr& e, const std::string& var);

// Replaces every occurrence of a variable by an expression.
Expr substitute(const Expr& e, const std::string& var, const Expr& replacement);

const char* func_name(Expr::Func f);

}  // namespace tsep
