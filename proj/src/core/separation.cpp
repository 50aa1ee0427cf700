#include "core/separation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace tsep {

namespace {

using Mat4 = std::array<std::array<double, 4>, 4>;

// Lower-triangular Cholesky factor of a positive definite form.
Mat4 cholesky(const SymmetricForm4& h) {
  Mat4 l{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j <= i; ++j) {
      double sum = h(i, j);
      for (int k = 0; k < j; ++k) sum -= l[i][k] * l[j][k];
      if (i == j) {
        if (!(sum > 0.0)) {
          fail(ErrorCode::NotRiemannian,
               "form is not positive definite (Cholesky pivot " +
                   std::to_string(sum) + " at index " + std::to_string(i) +
                   ")");
        }
        l[i][i] = std::sqrt(sum);
      } else {
        l[i][j] = sum / l[j][j];
      }
    }
  }
  return l;
}

// Solves L y = b for lower-triangular L.
Vec4 forward_solve(const Mat4& l, const Vec4& b) {
  Vec4 y{};
  for (int i = 0; i < 4; ++i) {
    double sum = b[i];
    for (int k = 0; k < i; ++k) sum -= l[i][k] * y[k];
    y[i] = sum / l[i][i];
  }
  return y;
}

// Solves L^T x = b.
Vec4 backward_solve_t(const Mat4& l, const Vec4& b) {
  Vec4 x{};
  for (int i = 3; i >= 0; --i) {
    double sum = b[i];
    for (int k = i + 1; k < 4; ++k) sum -= l[k][i] * x[k];
    x[i] = sum / l[i][i];
  }
  return x;
}

}  // namespace

double default_eigencount_tol(const SymmetricForm4& g) {
  return 1e-10 * g.max_abs();
}

SymmetricForm4 riemann_from_timelike(const SymmetricForm4& g, const Vec4& v,
                                     double tol) {
  const Signature sig = signature(g);
  if (!(sig == kLorentzianSignature)) {
    fail(ErrorCode::WrongSignature,
         "metric signature is " + sig.str() + ", expected (1,0,3)");
  }
  if (tol < 0.0) tol = default_classify_tol(g, v);
  if (classify(g, v, tol) != CausalClass::Timelike) {
    fail(ErrorCode::NotTimelike,
         "reference vector is not timelike: g(v,v) = " +
             std::to_string(evaluate_form(g, v, v)));
  }

  const double gvv = evaluate_form(g, v, v);

  // g-orthogonal decomposition of each basis vector: e_i = c_i v + w_i.
  std::array<double, 4> coeff;
  std::array<Vec4, 4> w;
  for (int i = 0; i < 4; ++i) {
    Vec4 e{};
    e[i] = 1.0;
    double gv = 0.0;
    for (int k = 0; k < 4; ++k) gv += g(i, k) * v[k];
    coeff[i] = gv / gvv;
    w[i] = vec_sub(e, vec_scale(coeff[i], v));
  }

  SymmetricForm4 h;
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      h.set(i, j, -coeff[i] * coeff[j] * gvv + evaluate_form(g, w[i], w[j]));
    }
  }
  h.check_finite("riemannian metric");
  return h;
}

TimeLine timelike_from_riemann(const SymmetricForm4& g,
                               const SymmetricForm4& h, double tol) {
  const Signature gsig = signature(g);
  if (!(gsig == kLorentzianSignature)) {
    fail(ErrorCode::WrongSignature,
         "metric signature is " + gsig.str() + ", expected (1,0,3)");
  }
  const Signature hsig = signature(h);
  if (!(hsig == kRiemannianSignature)) {
    fail(ErrorCode::NotRiemannian,
         "riemannian metric signature is " + hsig.str() + ", expected (0,0,4)");
  }
  if (tol < 0.0) tol = default_eigencount_tol(g);

  // Reduce g x = lambda h x to a standard symmetric problem: with
  // h = L L^T and x = L^-T q this is (L^-1 g L^-T) q = lambda q.
  const Mat4 l = cholesky(h);

  Mat4 a{};  // L^-1 g
  for (int j = 0; j < 4; ++j) {
    Vec4 col;
    for (int i = 0; i < 4; ++i) col[i] = g(i, j);
    const Vec4 y = forward_solve(l, col);
    for (int i = 0; i < 4; ++i) a[i][j] = y[i];
  }
  Mat4 c{};  // (L^-1 g) L^-T, computed row-wise via L c_row = a_row
  for (int i = 0; i < 4; ++i) {
    const Vec4 y = forward_solve(l, a[i]);
    c[i] = y;
  }

  SymmetricForm4 reduced;
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      reduced.set(i, j, 0.5 * (c[i][j] + c[j][i]));
    }
  }

  const EigenSystem4 eig = jacobi_eigen(reduced);

  int negatives = 0;
  for (double lambda : eig.values) {
    if (lambda < -tol) ++negatives;
  }
  if (negatives != 1) {
    fail(ErrorCode::EigencountViolation,
         "expected exactly one negative generalized eigenvalue, found " +
             std::to_string(negatives));
  }

  TimeLine line;
  line.eigenvalue = eig.values[0];
  line.gap = eig.values[1] - eig.values[0];

  double spectrum = 0.0;
  for (double lambda : eig.values) {
    spectrum = std::max(spectrum, std::abs(lambda));
  }
  line.low_confidence = line.gap < 1e-8 * spectrum;

  Vec4 x = backward_solve_t(l, eig.vectors[0]);
  const double hn = std::sqrt(evaluate_form(h, x, x));
  x = vec_scale(1.0 / hn, x);

  int lead = 0;
  for (int i = 1; i < 4; ++i) {
    if (std::abs(x[i]) > std::abs(x[lead])) lead = i;
  }
  if (x[lead] < 0.0) x = vec_scale(-1.0, x);

  line.direction = x;
  return line;
}

RoundtripReport roundtrip_check(const SymmetricForm4& g, const Vec4& v) {
  const SymmetricForm4 h = riemann_from_timelike(g, v);
  RoundtripReport report;
  report.line = timelike_from_riemann(g, h);

  // Line angle in the h metric via atan2 of the orthogonal rejection:
  // acos of the inner product cannot resolve angles below sqrt(eps).
  const Vec4& a = report.line.direction;  // already h-unit
  const double hvv = evaluate_form(h, v, v);
  Vec4 u{};
  for (int i = 0; i < 4; ++i) u[i] = v[i] / std::sqrt(hvv);
  const double c = evaluate_form(h, a, u);
  Vec4 perp{};
  for (int i = 0; i < 4; ++i) perp[i] = u[i] - c * a[i];
  const double s2 = std::max(evaluate_form(h, perp, perp), 0.0);
  report.line_angle = std::atan2(std::sqrt(s2), std::abs(c));
  report.eigenvalue_error = std::abs(report.line.eigenvalue + 1.0);
  return report;
}

}  // namespace tsep
