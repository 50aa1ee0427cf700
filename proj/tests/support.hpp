#pragma once

// Shared helpers for the unit tests: fixture paths, random form
// generators (via congruence, so signatures are exact by Sylvester), and
// a random expression generator that stays clear of domain boundaries.

#include <array>
#include <cmath>
#include <string>

#include "core/bilinear.hpp"
#include "core/expr.hpp"
#include "core/rng.hpp"

namespace tsep::testing {

inline std::string fixture_path(const std::string& name) {
  return std::string(TSEP_SPEC_DIR) + "/" + name;
}

inline std::string data_path(const std::string& name) {
  return std::string(TSEP_TEST_DATA_DIR) + "/" + name;
}

using Mat4 = std::array<std::array<double, 4>, 4>;

inline double det4(const Mat4& m) {
  double det = 0.0;
  for (int c = 0; c < 4; ++c) {
    std::array<std::array<double, 3>, 3> minor{};
    for (int i = 1; i < 4; ++i) {
      int cc = 0;
      for (int j = 0; j < 4; ++j) {
        if (j == c) continue;
        minor[i - 1][cc++] = m[i][j];
      }
    }
    const double d3 = minor[0][0] * (minor[1][1] * minor[2][2] -
                                     minor[1][2] * minor[2][1]) -
                      minor[0][1] * (minor[1][0] * minor[2][2] -
                                     minor[1][2] * minor[2][0]) +
                      minor[0][2] * (minor[1][0] * minor[2][1] -
                                     minor[1][1] * minor[2][0]);
    det += (c % 2 == 0 ? 1.0 : -1.0) * m[0][c] * d3;
  }
  return det;
}

// Random invertible matrix with entries in [-1,1]; rejection keeps the
// congruence well conditioned enough for 1e-10 scale assertions.
inline Mat4 random_invertible(Rng& rng) {
  for (;;) {
    Mat4 p;
    for (auto& row : p)
      for (double& x : row) x = rng.uniform(-1.0, 1.0);
    if (std::abs(det4(p)) > 0.1) return p;
  }
}

// P^T diag(d) P as a symmetric form (signature of diag(d) by Sylvester).
inline SymmetricForm4 congruence(const Vec4& diag, const Mat4& p) {
  SymmetricForm4 f;
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      double s = 0.0;
      for (int k = 0; k < 4; ++k) s += p[k][i] * diag[k] * p[k][j];
      f.set(i, j, s);
    }
  }
  return f;
}

inline SymmetricForm4 random_lorentzian(Rng& rng) {
  const Vec4 d{-rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0),
               rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0)};
  return congruence(d, random_invertible(rng));
}

inline SymmetricForm4 random_riemannian(Rng& rng) {
  const Vec4 d{rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0),
               rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0)};
  return congruence(d, random_invertible(rng));
}

// Timelike vector under g with a definite margin. Rejection sampling in
// a fixed box can starve when the congruence is ill conditioned (the
// timelike cone is present but only at tiny g-magnitudes), so instead
// start on the negative eigendirection normalized to g(v,v) = -1 and
// add a random perturbation, halved until the value stays below -1/2.
inline Vec4 random_timelike(const SymmetricForm4& g, Rng& rng) {
  const EigenSystem4 es = jacobi_eigen(g);
  const double s = 1.0 / std::sqrt(-es.values[0]);
  const double sign = rng.bits() % 2 == 0 ? 1.0 : -1.0;
  Vec4 axis;
  for (int i = 0; i < 4; ++i) axis[i] = sign * s * es.vectors[0][i];
  Vec4 r;
  for (double& x : r) x = rng.uniform(-1.0, 1.0);
  for (double scale = s;; scale *= 0.5) {
    Vec4 v;
    for (int i = 0; i < 4; ++i) v[i] = axis[i] + scale * r[i];
    if (evaluate_form(g, v, v) < -0.5) return v;
  }
}

inline double central_difference(const Expr& e, const std::string& var,
                                 Binding b, double step = 1e-6) {
  const double x = b.at(var);
  b[var] = x + step;
  const double hi = e.eval(b);
  b[var] = x - step;
  const double lo = e.eval(b);
  return (hi - lo) / (2.0 * step);
}

// --- random expression corpus -------------------------------------------
//
// Generates small ASTs over {x, y, u} whose value and derivative are
// well behaved near the binding: every subexpression is kept a margin
// away from the domain boundaries of /, log, sqrt, tan and abs, and
// magnitudes are capped so finite differences at step 1e-6 resolve the
// derivative to the tested accuracy.

inline Binding random_binding(Rng& rng) {
  return {{"x", rng.uniform(0.3, 2.0)},
          {"y", rng.uniform(0.3, 2.0)},
          {"u", rng.uniform(0.3, 2.0)}};
}

inline bool expr_is_tame(const Expr& e, const Binding& b) {
  double value = 0.0;
  try {
    value = e.eval(b);
  } catch (const Error&) {
    return false;
  }
  if (!std::isfinite(value) || std::abs(value) > 100.0) return false;

  switch (e.kind()) {
    case Expr::Kind::Number:
    case Expr::Kind::Variable:
      return true;
    case Expr::Kind::Negate:
      return expr_is_tame(e.left(), b);
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
    case Expr::Kind::Mul:
      return expr_is_tame(e.left(), b) && expr_is_tame(e.right(), b);
    case Expr::Kind::Div:
      return expr_is_tame(e.left(), b) && expr_is_tame(e.right(), b) &&
             std::abs(e.right().eval(b)) > 0.1;
    case Expr::Kind::Pow: {
      if (!expr_is_tame(e.left(), b)) return false;
      const double base = e.left().eval(b);
      return e.exponent() >= 0 || std::abs(base) > 1e-1;
    }
    case Expr::Kind::Call: {
      if (!expr_is_tame(e.left(), b)) return false;
      const double a = e.left().eval(b);
      switch (e.func()) {
        case Expr::Func::Log:
        case Expr::Func::Sqrt:
          return a > 1e-2;
        case Expr::Func::Tan:
          return std::abs(std::cos(a)) > 0.3;
        case Expr::Func::Abs:
          return std::abs(a) > 1e-2;
        case Expr::Func::Exp:
          return a < 4.5;
        default:
          return true;
      }
    }
  }
  return false;
}

inline Expr random_expr_node(Rng& rng, int depth) {
  if (depth <= 0) {
    switch (rng.bits() % 4) {
      case 0: return Expr::number(rng.uniform(0.5, 3.0));
      case 1: return Expr::variable("x");
      case 2: return Expr::variable("y");
      default: return Expr::variable("u");
    }
  }
  switch (rng.bits() % 9) {
    case 0:
      return Expr::add(random_expr_node(rng, depth - 1),
                       random_expr_node(rng, depth - 1));
    case 1:
      return Expr::sub(random_expr_node(rng, depth - 1),
                       random_expr_node(rng, depth - 1));
    case 2:
      return Expr::mul(random_expr_node(rng, depth - 1),
                       random_expr_node(rng, depth - 1));
    case 3:
      return Expr::div(random_expr_node(rng, depth - 1),
                       random_expr_node(rng, depth - 1));
    case 4:
      return Expr::negate(random_expr_node(rng, depth - 1));
    case 5:
      return Expr::pow(random_expr_node(rng, depth - 1),
                       int(rng.bits() % 5) - 2);
    case 6: {
      static const Expr::Func funcs[] = {
          Expr::Func::Sin,  Expr::Func::Cos,  Expr::Func::Tan,
          Expr::Func::Exp,  Expr::Func::Log,  Expr::Func::Sqrt,
          Expr::Func::Sinh, Expr::Func::Cosh, Expr::Func::Tanh,
          Expr::Func::Abs};
      return Expr::call(funcs[rng.bits() % 10],
                        random_expr_node(rng, depth - 1));
    }
    default:
      return random_expr_node(rng, 0);
  }
}

// Draws until the candidate is tame at b (margins above). Depth 3 keeps
// the corpus small enough that rejection converges quickly.
inline Expr random_safe_expr(Rng& rng, const Binding& b) {
  for (;;) {
    const Expr e = random_expr_node(rng, 3);
    if (expr_is_tame(e, b)) return e;
  }
}

}  // namespace tsep::testing
