#pragma once

#include "core/separation.hpp"
#include "core/spacetime.hpp"

namespace tsep {

// Christoffel symbols of the g-compatible (Levi-Civita) connection at a
// point, gamma[mu][nu][rho] = Gamma^mu_{nu rho}, symmetric in nu, rho.
struct ChristoffelField {
  std::array<std::array<std::array<double, 4>, 4>, 4> gamma{};

  double max_abs() const;
  double lower_symmetry_residual() const;  // max |G^m_nr - G^m_rn|
};

// A vector field given by four component expressions in the coordinates.
using VectorField = std::array<Expr, 4>;

// Gamma^mu_{nu rho} = 1/2 g^{mu sigma} (d_nu g_{sigma rho}
//   + d_rho g_{sigma nu} - d_sigma g_{nu rho}), with the partials taken
// from the symbolic derivatives of the metric components.
ChristoffelField christoffel_at(const SpacetimeSpec& spec, const Point& p);

// (nabla_s F)^mu = s^nu (d_nu F^mu + Gamma^mu_{nu rho} F^rho) at p; only
// the value of s at p enters.
Vec4 covariant_derivative(const SpacetimeSpec& spec, const VectorField& s,
                          const VectorField& f, const Point& p);
Vec4 covariant_derivative_at(const SpacetimeSpec& spec, const Vec4& s_value,
                             const VectorField& f, const Point& p);

// Time differentiation: s = multiplier * (canonical time line direction).
Vec4 time_derivative(const SpacetimeSpec& spec, const Expr& multiplier,
                     const VectorField& f, const Point& p);

// g-orthonormal frame of the orthogonal complement of the time line at p
// (Gram-Schmidt under g from the projected standard basis). Positive
// definiteness of g on this complement makes the frame well defined.
std::array<Vec4, 3> space_frame_at(const SpacetimeSpec& spec, const Point& p);

// Space differentiation: s = sum_i coeffs_i * frame_i.
Vec4 space_derivative(const SpacetimeSpec& spec,
                      const std::array<Expr, 3>& coeffs, const VectorField& f,
                      const Point& p);

// Max over random constant-field probes (X, Y, Z) of
// |X(g(Y,Z)) - g(nabla_X Y, Z) - g(Y, nabla_X Z)|; vanishes for the
// Levi-Civita connection up to roundoff and symbolic-evaluation noise.
double metric_compatibility_residual(const SpacetimeSpec& spec, const Point& p,
                                     int probes, uint64_t seed = 0);

}  // namespace tsep
