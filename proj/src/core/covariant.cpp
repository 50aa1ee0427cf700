#include "core/covariant.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "core/rng.hpp"
#include "core/time_bundle.hpp"

namespace tsep {

namespace {

using Mat4 = std::array<std::array<double, 4>, 4>;

// Gauss-Jordan inverse with partial pivoting.
Mat4 invert(const SymmetricForm4& g) {
  Mat4 a{};
  Mat4 inv{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) a[i][j] = g(i, j);
    inv[i][i] = 1.0;
  }
  const double scale = std::max(g.max_abs(), 1e-300);
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 4; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) < 1e-13 * scale) {
      fail(ErrorCode::DegenerateMetric,
           "metric is numerically singular (pivot " +
           std::to_string(a[pivot][col]) + ")");
    }
    std::swap(a[col], a[pivot]);
    std::swap(inv[col], inv[pivot]);
    const double d = a[col][col];
    for (int j = 0; j < 4; ++j) {
      a[col][j] /= d;
      inv[col][j] /= d;
    }
    for (int r = 0; r < 4; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      if (f == 0.0) continue;
      for (int j = 0; j < 4; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

// d g_{ij} / d x^k at p, from the symbolic partials prepared at load.
std::array<std::array<std::array<double, 4>, 4>, 4> metric_partials_at(
    const SpacetimeSpec& spec, const Point& p) {
  const Binding b = spec.binding_at(p);
  std::array<std::array<std::array<double, 4>, 4>, 4> d{};
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      for (int k = 0; k < 4; ++k) {
        const double v = spec.g_partial(i, j, k).eval(b);
        d[i][j][k] = v;
        d[j][i][k] = v;
      }
    }
  }
  return d;
}

void check_field_vars(const SpacetimeSpec& spec, const Expr& e,
                      const std::string& context) {
  std::set<std::string> allowed;
  for (const auto& c : spec.coords()) allowed.insert(c);
  for (const auto& [k, v] : spec.params()) allowed.insert(k);
  for (const auto& var : e.free_variables()) {
    if (!allowed.count(var)) {
      fail(ErrorCode::UnknownCoordinate,
           context + ": unknown name '" + var + "'");
    }
  }
}

}  // namespace

double ChristoffelField::max_abs() const {
  double m = 0.0;
  for (const auto& plane : gamma) {
    for (const auto& row : plane) {
      for (double v : row) m = std::max(m, std::abs(v));
    }
  }
  return m;
}

double ChristoffelField::lower_symmetry_residual() const {
  double m = 0.0;
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      for (int rho = 0; rho < 4; ++rho) {
        m = std::max(m, std::abs(gamma[mu][nu][rho] - gamma[mu][rho][nu]));
      }
    }
  }
  return m;
}

ChristoffelField christoffel_at(const SpacetimeSpec& spec, const Point& p) {
  const SymmetricForm4 g = spec.metric_at(p);
  const Mat4 ginv = invert(g);
  const auto dg = metric_partials_at(spec, p);

  ChristoffelField field;
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      for (int rho = nu; rho < 4; ++rho) {
        double sum = 0.0;
        for (int sigma = 0; sigma < 4; ++sigma) {
          sum += ginv[mu][sigma] * (dg[sigma][rho][nu] + dg[sigma][nu][rho] -
                                    dg[nu][rho][sigma]);
        }
        field.gamma[mu][nu][rho] = 0.5 * sum;
        field.gamma[mu][rho][nu] = 0.5 * sum;
      }
    }
  }
  return field;
}

Vec4 covariant_derivative_at(const SpacetimeSpec& spec, const Vec4& s_value,
                             const VectorField& f, const Point& p) {
  require_finite(s_value, "derivative direction");
  for (int mu = 0; mu < 4; ++mu) {
    check_field_vars(spec, f[mu], "field component " + std::to_string(mu));
  }
  spec.require_valid_point(p);

  const ChristoffelField gamma = christoffel_at(spec, p);
  const Binding b = spec.binding_at(p);

  std::array<double, 4> fval;
  std::array<std::array<double, 4>, 4> df;  // df[mu][nu] = d_nu F^mu
  for (int mu = 0; mu < 4; ++mu) {
    fval[mu] = f[mu].eval(b);
    for (int nu = 0; nu < 4; ++nu) {
      df[mu][nu] = differentiate(f[mu], spec.coords()[nu]).eval(b);
    }
  }

  Vec4 out{};
  for (int mu = 0; mu < 4; ++mu) {
    double sum = 0.0;
    for (int nu = 0; nu < 4; ++nu) {
      double term = df[mu][nu];
      for (int rho = 0; rho < 4; ++rho) {
        term += gamma.gamma[mu][nu][rho] * fval[rho];
      }
      sum += s_value[nu] * term;
    }
    out[mu] = sum;
  }
  return out;
}

Vec4 covariant_derivative(const SpacetimeSpec& spec, const VectorField& s,
                          const VectorField& f, const Point& p) {
  const Binding b = spec.binding_at(p);
  Vec4 s_value;
  for (int nu = 0; nu < 4; ++nu) {
    check_field_vars(spec, s[nu], "direction component " + std::to_string(nu));
    s_value[nu] = s[nu].eval(b);
  }
  return covariant_derivative_at(spec, s_value, f, p);
}

Vec4 time_derivative(const SpacetimeSpec& spec, const Expr& multiplier,
                     const VectorField& f, const Point& p) {
  check_field_vars(spec, multiplier, "section multiplier");
  const double m = multiplier.eval(spec.binding_at(p));
  const TimeLine line = line_at(spec, p);
  return covariant_derivative_at(spec, vec_scale(m, line.direction), f, p);
}

std::array<Vec4, 3> space_frame_at(const SpacetimeSpec& spec, const Point& p) {
  const SymmetricForm4 g = spec.metric_at(p);
  const TimeLine line = line_at(spec, p);
  const std::array<Vec4, 3> raw = orthogonal_complement(g, line.direction);

  // Gram-Schmidt under g; positive definiteness on the complement keeps
  // each norm strictly positive.
  std::array<Vec4, 3> frame{};
  for (int i = 0; i < 3; ++i) {
    Vec4 u = raw[i];
    for (int j = 0; j < i; ++j) {
      u = vec_sub(u, vec_scale(evaluate_form(g, raw[i], frame[j]), frame[j]));
    }
    const double norm2 = evaluate_form(g, u, u);
    if (!(norm2 > 0.0)) {
      fail(ErrorCode::DegenerateForm,
           "space frame vector " + std::to_string(i) +
               " has non-positive g-norm " + std::to_string(norm2));
    }
    frame[i] = vec_scale(1.0 / std::sqrt(norm2), u);
  }
  return frame;
}

Vec4 space_derivative(const SpacetimeSpec& spec,
                      const std::array<Expr, 3>& coeffs, const VectorField& f,
                      const Point& p) {
  const std::array<Vec4, 3> frame = space_frame_at(spec, p);
  const Binding b = spec.binding_at(p);
  Vec4 s{};
  for (int i = 0; i < 3; ++i) {
    check_field_vars(spec, coeffs[i],
                     "frame coefficient " + std::to_string(i));
    s = vec_add(s, vec_scale(coeffs[i].eval(b), frame[i]));
  }
  return covariant_derivative_at(spec, s, f, p);
}

double metric_compatibility_residual(const SpacetimeSpec& spec, const Point& p,
                                     int probes, uint64_t seed) {
  if (probes <= 0) {
    fail(ErrorCode::InvalidArgument, "probe count must be positive");
  }
  spec.require_valid_point(p);

  const SymmetricForm4 g = spec.metric_at(p);
  const ChristoffelField gamma = christoffel_at(spec, p);
  const auto dg = metric_partials_at(spec, p);

  Rng rng(seed);
  auto random_vec = [&rng]() {
    Vec4 v;
    for (double& c : v) c = rng.uniform(-1.0, 1.0);
    return v;
  };

  // For constant-coefficient fields, nabla_X Y reduces to the Gamma term
  // and X(g(Y,Z)) to the contraction of the metric partials.
  double worst = 0.0;
  for (int probe = 0; probe < probes; ++probe) {
    const Vec4 x = random_vec();
    const Vec4 y = random_vec();
    const Vec4 z = random_vec();

    double lhs = 0.0;
    for (int nu = 0; nu < 4; ++nu) {
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
          lhs += x[nu] * dg[i][j][nu] * y[i] * z[j];
        }
      }
    }

    Vec4 nxy{};
    Vec4 nxz{};
    for (int mu = 0; mu < 4; ++mu) {
      for (int nu = 0; nu < 4; ++nu) {
        for (int rho = 0; rho < 4; ++rho) {
          nxy[mu] += x[nu] * gamma.gamma[mu][nu][rho] * y[rho];
          nxz[mu] += x[nu] * gamma.gamma[mu][nu][rho] * z[rho];
        }
      }
    }

    const double rhs = evaluate_form(g, nxy, z) + evaluate_form(g, y, nxz);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

}  // namespace tsep
