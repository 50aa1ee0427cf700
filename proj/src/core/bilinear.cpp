#include "core/bilinear.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace tsep {

namespace {

// Cyclic Jacobi on an NxN symmetric matrix. Off-diagonal Frobenius norm
// must drop below 1e-14 * |f|_F within 100 sweeps.
template <int N>
void jacobi_impl(std::array<std::array<double, N>, N>& a,
                 std::array<std::array<double, N>, N>& v,
                 std::array<double, N>& values) {
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) v[i][j] = (i == j) ? 1.0 : 0.0;
  }

  double norm = 0.0;
  for (int i = 0; i < N; ++i) {
    for (int j = 0; j < N; ++j) norm += a[i][j] * a[i][j];
  }
  norm = std::sqrt(norm);
  const double stop = 1e-14 * norm;

  auto off_norm = [&]() {
    double s = 0.0;
    for (int i = 0; i < N; ++i) {
      for (int j = i + 1; j < N; ++j) s += 2.0 * a[i][j] * a[i][j];
    }
    return std::sqrt(s);
  };

  constexpr int kMaxSweeps = 100;
  int sweep = 0;
  while (off_norm() > stop) {
    if (++sweep > kMaxSweeps) {
      fail(ErrorCode::NoConvergence,
           "Jacobi eigensolver did not converge within 100 sweeps");
    }
    for (int p = 0; p < N - 1; ++p) {
      for (int q = p + 1; q < N; ++q) {
        const double apq = a[p][q];
        if (apq == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 1.0 / (2.0 * theta);  // avoids overflow in theta^2
        } else {
          t = (theta >= 0.0 ? 1.0 : -1.0) /
              (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (int k = 0; k < N; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < N; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (int k = 0; k < N; ++k) {
          const double vkp = v[k][p];
          const double vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }

  for (int i = 0; i < N; ++i) values[i] = a[i][i];

  // Sort ascending, permuting eigenvector columns alongside.
  std::array<int, N> order;
  for (int i = 0; i < N; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](int x, int y) { return values[x] < values[y]; });
  std::array<double, N> sv;
  std::array<std::array<double, N>, N> svec;
  for (int k = 0; k < N; ++k) {
    sv[k] = values[order[k]];
    for (int i = 0; i < N; ++i) svec[i][k] = v[i][order[k]];
  }
  values = sv;
  v = svec;
}

}  // namespace

double vec_dot(const Vec4& a, const Vec4& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
}

double vec_norm(const Vec4& a) { return std::sqrt(vec_dot(a, a)); }

Vec4 vec_scale(double c, const Vec4& a) {
  return {c * a[0], c * a[1], c * a[2], c * a[3]};
}

Vec4 vec_add(const Vec4& a, const Vec4& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}

Vec4 vec_sub(const Vec4& a, const Vec4& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}

bool vec_is_zero(const Vec4& a) {
  return a[0] == 0.0 && a[1] == 0.0 && a[2] == 0.0 && a[3] == 0.0;
}

void require_finite(const Vec4& v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) {
      fail(ErrorCode::InvalidArgument,
           std::string(what) + " has a non-finite component");
    }
  }
}

int SymmetricForm4::tri_index(int i, int j) {
  if (i > j) std::swap(i, j);
  // Row-major upper triangle of a 4x4.
  static constexpr int row_start[4] = {0, 4, 7, 9};
  return row_start[i] + (j - i);
}

void SymmetricForm4::set(int i, int j, double value) {
  a_[tri_index(i, j)] = value;
}

SymmetricForm4 SymmetricForm4::diagonal(double d0, double d1, double d2,
                                        double d3) {
  SymmetricForm4 f;
  f.set(0, 0, d0);
  f.set(1, 1, d1);
  f.set(2, 2, d2);
  f.set(3, 3, d3);
  return f;
}

SymmetricForm4 SymmetricForm4::identity() { return diagonal(1, 1, 1, 1); }

SymmetricForm4 SymmetricForm4::from_matrix(const double m[16]) {
  double scale = 0.0;
  for (int k = 0; k < 16; ++k) {
    if (!std::isfinite(m[k])) {
      fail(ErrorCode::InvalidArgument, "matrix entry is not finite");
    }
    scale = std::max(scale, std::abs(m[k]));
  }
  SymmetricForm4 f;
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      const double upper = m[i * 4 + j];
      const double lower = m[j * 4 + i];
      if (std::abs(upper - lower) > 1e-12 * std::max(1.0, scale)) {
        fail(ErrorCode::InvalidArgument,
             "matrix is not symmetric at entry (" + std::to_string(i) + "," +
                 std::to_string(j) + ")");
      }
      f.set(i, j, 0.5 * (upper + lower));
    }
  }
  return f;
}

void SymmetricForm4::to_matrix(double out[16]) const {
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out[i * 4 + j] = (*this)(i, j);
  }
}

double SymmetricForm4::max_abs() const {
  double m = 0.0;
  for (double x : a_) m = std::max(m, std::abs(x));
  return m;
}

void SymmetricForm4::check_finite(const char* what) const {
  for (double x : a_) {
    if (!std::isfinite(x)) {
      fail(ErrorCode::MathDomain,
           std::string(what) + " has a non-finite entry");
    }
  }
}

std::string Signature::str() const {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "(%d,%d,%d)", n_negative, n_zero,
                n_positive);
  return buf;
}

const char* causal_class_name(CausalClass c) {
  switch (c) {
    case CausalClass::Timelike: return "Timelike";
    case CausalClass::Null: return "Null";
    case CausalClass::Spacelike: return "Spacelike";
  }
  return "Null";
}

double evaluate_form(const SymmetricForm4& f, const Vec4& u, const Vec4& v) {
  double s = 0.0;
  for (int i = 0; i < 4; ++i) {
    double row = 0.0;
    for (int j = 0; j < 4; ++j) row += f(i, j) * v[j];
    s += u[i] * row;
  }
  return s;
}

double default_classify_tol(const SymmetricForm4& g, const Vec4& v) {
  return 1e-9 * std::max(1.0, g.max_abs()) * vec_dot(v, v);
}

double default_signature_tol(const SymmetricForm4& f) {
  return 1e-9 * std::max(1.0, f.max_abs());
}

Signature signature(const SymmetricForm4& f, double tol) {
  if (!(tol > 0.0)) {
    fail(ErrorCode::InvalidArgument, "signature tolerance must be positive");
  }
  const EigenSystem4 es = jacobi_eigen(f);
  Signature sig;
  for (double lambda : es.values) {
    if (lambda < -tol) {
      ++sig.n_negative;
    } else if (lambda > tol) {
      ++sig.n_positive;
    } else {
      ++sig.n_zero;
    }
  }
  return sig;
}

Signature signature(const SymmetricForm4& f) {
  return signature(f, default_signature_tol(f));
}

CausalClass classify(const SymmetricForm4& g, const Vec4& v, double tol) {
  if (vec_is_zero(v)) {
    fail(ErrorCode::ZeroVector, "cannot classify the zero vector");
  }
  if (tol < 0.0) {
    fail(ErrorCode::InvalidArgument, "classification tolerance must be >= 0");
  }
  const double q = evaluate_form(g, v, v);
  if (q < -tol) return CausalClass::Timelike;
  if (q > tol) return CausalClass::Spacelike;
  return CausalClass::Null;
}

CausalClass classify(const SymmetricForm4& g, const Vec4& v) {
  return classify(g, v, default_classify_tol(g, v));
}

bool in_null_cone(const SymmetricForm4& g, const Vec4& v, double tol) {
  return std::abs(evaluate_form(g, v, v)) <= tol;
}

bool in_light_cone(const SymmetricForm4& g, const Vec4& v, double tol) {
  return evaluate_form(g, v, v) >= -tol;
}

std::array<Vec4, 3> orthogonal_complement(const SymmetricForm4& g,
                                          const Vec4& v) {
  if (vec_is_zero(v)) {
    fail(ErrorCode::ZeroVector, "complement of the zero vector is undefined");
  }
  if (signature(g).n_zero > 0) {
    fail(ErrorCode::DegenerateForm,
         "form is degenerate; orthogonal complement is not well defined");
  }
  if (classify(g, v) == CausalClass::Null) {
    fail(ErrorCode::NullVector,
         "null vector lies in its own complement; complement is not "
         "complementary");
  }

  // Drop the seed most aligned with v.
  int drop = 0;
  for (int i = 1; i < 4; ++i) {
    if (std::abs(v[i]) > std::abs(v[drop])) drop = i;
  }

  const double gvv = evaluate_form(g, v, v);
  std::array<Vec4, 3> basis{};
  int out = 0;
  for (int i = 0; i < 4; ++i) {
    if (i == drop) continue;
    Vec4 e{};
    e[i] = 1.0;
    const double coeff = evaluate_form(g, e, v) / gvv;
    Vec4 w = vec_sub(e, vec_scale(coeff, v));

    // Rescale so the leading significant component is 1.
    double m = 0.0;
    for (double x : w) m = std::max(m, std::abs(x));
    int lead = 0;
    while (lead < 4 && std::abs(w[lead]) <= 1e-12 * m) ++lead;
    basis[out++] = vec_scale(1.0 / w[lead], w);
  }
  return basis;
}

RestrictedForm restrict_to_complement(const SymmetricForm4& g, const Vec4& v) {
  if (classify(g, v) != CausalClass::Timelike) {
    fail(ErrorCode::NotTimelike,
         "restriction requires a timelike vector, got " +
             std::string(causal_class_name(classify(g, v))));
  }
  RestrictedForm r;
  r.basis = orthogonal_complement(g, v);
  for (int i = 0; i < 3; ++i) {
    for (int j = i; j < 3; ++j) {
      const double gij = evaluate_form(g, r.basis[i], r.basis[j]);
      r.gram[i][j] = gij;
      r.gram[j][i] = gij;
    }
  }
  const EigenSystem3 es = jacobi_eigen3(r.gram);
  r.positive_definite = es.values[0] > 0.0;
  return r;
}

EigenSystem4 jacobi_eigen(const SymmetricForm4& f) {
  std::array<std::array<double, 4>, 4> a;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) a[i][j] = f(i, j);
  }
  std::array<std::array<double, 4>, 4> v;
  EigenSystem4 out;
  jacobi_impl<4>(a, v, out.values);
  for (int k = 0; k < 4; ++k) {
    for (int i = 0; i < 4; ++i) out.vectors[k][i] = v[i][k];
  }
  return out;
}

EigenSystem3 jacobi_eigen3(const std::array<std::array<double, 3>, 3>& m) {
  auto a = m;
  std::array<std::array<double, 3>, 3> v;
  EigenSystem3 out;
  jacobi_impl<3>(a, v, out.values);
  for (int k = 0; k < 3; ++k) {
    for (int i = 0; i < 3; ++i) out.vectors[k][i] = v[i][k];
  }
  return out;
}

}  // namespace tsep
