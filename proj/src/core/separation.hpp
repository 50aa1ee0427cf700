#pragma once

#include "core/bilinear.hpp"

namespace tsep {

// The timelike eigendirection of g under the h-identification: the unique
// negative-eigenvalue solution of g x = lambda h x.
struct TimeLine {
  Vec4 direction{};        // h-norm 1, largest-magnitude component positive
  double eigenvalue = 0;   // lambda_p < 0
  double gap = 0;          // distance to the nearest other eigenvalue
  bool low_confidence = false;  // gap below 1e-8 of the spectrum scale
};

// Builds the Riemannian metric determined by a timelike direction: with
// the g-orthogonal decomposition u = lambda_u v + w_u,
//
//   h(u, u') = -lambda_u lambda_u' g(v,v) + g(w_u, w_u').
//
// The result depends only on the line through v and flips the sign of g
// along v while keeping it on the orthogonal complement. tol < 0 selects
// the default timelike-classification tolerance.
SymmetricForm4 riemann_from_timelike(const SymmetricForm4& g, const Vec4& v,
                                     double tol = -1.0);

// Recovers the time line from a Lorentzian g and Riemannian h by solving
// the generalized symmetric eigenproblem g x = lambda h x (Cholesky
// reduction to a standard problem). Exactly one eigenvalue must lie below
// -tol; tol < 0 selects 1e-10 * |g|_inf.
TimeLine timelike_from_riemann(const SymmetricForm4& g,
                               const SymmetricForm4& h, double tol = -1.0);

struct RoundtripReport {
  double line_angle = 0;         // radians between recovered line and span(v)
  double eigenvalue_error = 0;   // |lambda_p - (-1)|
  TimeLine line;
};

// Composes both directions: h = riemann_from_timelike(g, v), then
// timelike_from_riemann(g, h). With this h the identity h(v,.) = -g(v,.)
// makes v an eigenvector with eigenvalue exactly -1, so both residuals
// vanish up to roundoff.
RoundtripReport roundtrip_check(const SymmetricForm4& g, const Vec4& v);

// Negative-eigenvalue counting tolerance, 1e-10 * |g|_inf.
double default_eigencount_tol(const SymmetricForm4& g);

}  // namespace tsep
