#pragma once

#include <array>
#include <string>

#include "core/error.hpp"

namespace tsep {

// Coordinate components of a tangent vector at a point.
using Vec4 = std::array<double, 4>;

double vec_dot(const Vec4& a, const Vec4& b);
double vec_norm(const Vec4& a);
Vec4 vec_scale(double c, const Vec4& a);
Vec4 vec_add(const Vec4& a, const Vec4& b);
Vec4 vec_sub(const Vec4& a, const Vec4& b);
bool vec_is_zero(const Vec4& a);
void require_finite(const Vec4& v, const char* what);

// A symmetric bilinear form on a 4-dimensional tangent space. Only the
// upper triangle is stored, so symmetry holds exactly by construction.
class SymmetricForm4 {
 public:
  SymmetricForm4() = default;

  double operator()(int i, int j) const { return a_[tri_index(i, j)]; }
  void set(int i, int j, double value);

  static SymmetricForm4 diagonal(double d0, double d1, double d2, double d3);
  static SymmetricForm4 identity();
  // Builds from a full row-major 4x4 matrix; rejects asymmetric or
  // non-finite input.
  static SymmetricForm4 from_matrix(const double m[16]);

  void to_matrix(double out[16]) const;

  // Entrywise max-abs norm.
  double max_abs() const;

  // Ensures all stored entries are finite.
  void check_finite(const char* what) const;

 private:
  static int tri_index(int i, int j);
  std::array<double, 10> a_{};
};

struct Signature {
  int n_negative = 0;
  int n_zero = 0;
  int n_positive = 0;

  bool operator==(const Signature&) const = default;
  std::string str() const;  // "(n,z,p)"
};

inline constexpr Signature kLorentzianSignature{1, 0, 3};
inline constexpr Signature kRiemannianSignature{0, 0, 4};

enum class CausalClass { Timelike, Null, Spacelike };

const char* causal_class_name(CausalClass c);

// g(u,v) = u^T g v.
double evaluate_form(const SymmetricForm4& f, const Vec4& u, const Vec4& v);

// Default classification tolerance, 1e-9 * |g|_inf * |v|^2 (Euclidean norm).
double default_classify_tol(const SymmetricForm4& g, const Vec4& v);

// Tolerance used for eigenvalue-sign counting on a form itself.
double default_signature_tol(const SymmetricForm4& f);

// Counts eigenvalues below -tol / within [-tol, tol] / above tol.
Signature signature(const SymmetricForm4& f, double tol);
Signature signature(const SymmetricForm4& f);

CausalClass classify(const SymmetricForm4& g, const Vec4& v, double tol);
CausalClass classify(const SymmetricForm4& g, const Vec4& v);

// The cone membership predicates, taken verbatim from the source
// convention: the null cone is g(v,v)=0 and the "light cone" is
// g(v,v)>=0 (which under signature (-,+,+,+) excludes timelike vectors).
bool in_null_cone(const SymmetricForm4& g, const Vec4& v, double tol);
bool in_light_cone(const SymmetricForm4& g, const Vec4& v, double tol);

// Basis of the g-orthogonal complement of v. Deterministic construction:
// the standard basis vector most aligned with v (largest |v_i|) is
// dropped, the rest are projected g-orthogonally to v and rescaled so the
// leading significant component is 1.
std::array<Vec4, 3> orthogonal_complement(const SymmetricForm4& g,
                                          const Vec4& v);

struct RestrictedForm {
  std::array<std::array<double, 3>, 3> gram{};
  bool positive_definite = false;
  std::array<Vec4, 3> basis{};
};

// Gram matrix of g on the orthogonal complement of a timelike v.
RestrictedForm restrict_to_complement(const SymmetricForm4& g, const Vec4& v);

struct EigenSystem4 {
  std::array<double, 4> values{};   // ascending
  std::array<Vec4, 4> vectors{};    // vectors[k] pairs with values[k]
};

// Cyclic Jacobi diagonalization, f = Q diag(values) Q^T with Q orthonormal.
EigenSystem4 jacobi_eigen(const SymmetricForm4& f);

// 3x3 companion used for the restricted form. Same algorithm.
struct EigenSystem3 {
  std::array<double, 3> values{};
  std::array<std::array<double, 3>, 3> vectors{};
};
EigenSystem3 jacobi_eigen3(const std::array<std::array<double, 3>, 3>& m);

}  // namespace tsep
