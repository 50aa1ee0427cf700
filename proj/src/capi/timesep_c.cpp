#include "timesep/timesep.h"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

#include "core/covariant.hpp"
#include "core/report.hpp"
#include "core/separation.hpp"
#include "core/spacetime.hpp"
#include "core/time_bundle.hpp"

struct tsep_spacetime {
  tsep::SpacetimeSpec spec;
};

namespace {

thread_local std::string t_last_error = "no error";

tsep_status map_code(tsep::ErrorCode code) {
  using tsep::ErrorCode;
  switch (code) {
    case ErrorCode::ZeroVector: return TSEP_E_ZERO_VECTOR;
    case ErrorCode::NullVector: return TSEP_E_NULL_VECTOR;
    case ErrorCode::NotTimelike: return TSEP_E_NOT_TIMELIKE;
    case ErrorCode::DegenerateForm: return TSEP_E_DEGENERATE_FORM;
    case ErrorCode::DegenerateMetric: return TSEP_E_DEGENERATE_METRIC;
    case ErrorCode::NoConvergence: return TSEP_E_NO_CONVERGENCE;
    case ErrorCode::SyntaxError: return TSEP_E_SYNTAX;
    case ErrorCode::UnknownFunction: return TSEP_E_UNKNOWN_FUNCTION;
    case ErrorCode::UnboundVariable: return TSEP_E_UNBOUND_VARIABLE;
    case ErrorCode::MathDomain: return TSEP_E_MATH_DOMAIN;
    case ErrorCode::ParseError: return TSEP_E_PARSE;
    case ErrorCode::UnknownCoordinate: return TSEP_E_UNKNOWN_COORDINATE;
    case ErrorCode::AsymmetricMetric: return TSEP_E_ASYMMETRIC_METRIC;
    case ErrorCode::ExcludedPoint: return TSEP_E_EXCLUDED_POINT;
    case ErrorCode::WrongSignature: return TSEP_E_WRONG_SIGNATURE;
    case ErrorCode::NotRiemannian: return TSEP_E_NOT_RIEMANNIAN;
    case ErrorCode::EigencountViolation: return TSEP_E_EIGENCOUNT;
    case ErrorCode::ResolutionExceeded: return TSEP_E_RESOLUTION_EXCEEDED;
    case ErrorCode::InvalidArgument: return TSEP_E_INVALID_ARGUMENT;
    case ErrorCode::Io: return TSEP_E_IO;
    case ErrorCode::Internal: return TSEP_E_INTERNAL;
  }
  return TSEP_E_INTERNAL;
}

// Runs the body, capturing exceptions into status + last-error message.
template <typename Body>
tsep_status guarded(Body&& body) {
  try {
    body();
    t_last_error = "no error";
    return TSEP_OK;
  } catch (const tsep::Error& e) {
    t_last_error = e.what();
    return map_code(e.code());
  } catch (const std::bad_alloc&) {
    t_last_error = "out of memory";
    return TSEP_E_INTERNAL;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return TSEP_E_INTERNAL;
  }
}

tsep_status invalid(const char* message) {
  t_last_error = message;
  return TSEP_E_INVALID_ARGUMENT;
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

tsep::Point to_point(const double p[4]) {
  return tsep::Point{p[0], p[1], p[2], p[3]};
}

void form_out(const tsep::SymmetricForm4& f, double out[16]) {
  f.to_matrix(out);
}

void line_out(const tsep::TimeLine& line, double direction[4],
              double* eigenvalue, double* gap, int* low_confidence) {
  for (int i = 0; i < 4; ++i) direction[i] = line.direction[i];
  if (eigenvalue) *eigenvalue = line.eigenvalue;
  if (gap) *gap = line.gap;
  if (low_confidence) *low_confidence = line.low_confidence ? 1 : 0;
}

tsep::VectorField to_field(const char* const field[4]) {
  tsep::VectorField f;
  for (int i = 0; i < 4; ++i) {
    if (!field[i]) {
      tsep::fail(tsep::ErrorCode::InvalidArgument,
                 "field component " + std::to_string(i) + " is null");
    }
    try {
      f[i] = tsep::parse_expression(field[i]);
    } catch (const tsep::Error& e) {
      tsep::fail(e.code(),
                 "field component " + std::to_string(i) + ": " + e.what());
    }
  }
  return f;
}

tsep_status report_out(const tsep::report::Outcome& outcome, char** json_out,
                       int* exit_status) {
  *json_out = copy_string(outcome.json);
  if (exit_status) *exit_status = outcome.exit_status;
  return TSEP_OK;
}

}  // namespace

extern "C" {

const char* tsep_last_error(void) { return t_last_error.c_str(); }

const char* tsep_status_name(tsep_status status) {
  switch (status) {
    case TSEP_OK: return "TSEP_OK";
    case TSEP_E_ZERO_VECTOR: return "TSEP_E_ZERO_VECTOR";
    case TSEP_E_NULL_VECTOR: return "TSEP_E_NULL_VECTOR";
    case TSEP_E_NOT_TIMELIKE: return "TSEP_E_NOT_TIMELIKE";
    case TSEP_E_DEGENERATE_FORM: return "TSEP_E_DEGENERATE_FORM";
    case TSEP_E_DEGENERATE_METRIC: return "TSEP_E_DEGENERATE_METRIC";
    case TSEP_E_NO_CONVERGENCE: return "TSEP_E_NO_CONVERGENCE";
    case TSEP_E_SYNTAX: return "TSEP_E_SYNTAX";
    case TSEP_E_UNKNOWN_FUNCTION: return "TSEP_E_UNKNOWN_FUNCTION";
    case TSEP_E_UNBOUND_VARIABLE: return "TSEP_E_UNBOUND_VARIABLE";
    case TSEP_E_MATH_DOMAIN: return "TSEP_E_MATH_DOMAIN";
    case TSEP_E_PARSE: return "TSEP_E_PARSE";
    case TSEP_E_UNKNOWN_COORDINATE: return "TSEP_E_UNKNOWN_COORDINATE";
    case TSEP_E_ASYMMETRIC_METRIC: return "TSEP_E_ASYMMETRIC_METRIC";
    case TSEP_E_EXCLUDED_POINT: return "TSEP_E_EXCLUDED_POINT";
    case TSEP_E_WRONG_SIGNATURE: return "TSEP_E_WRONG_SIGNATURE";
    case TSEP_E_NOT_RIEMANNIAN: return "TSEP_E_NOT_RIEMANNIAN";
    case TSEP_E_EIGENCOUNT: return "TSEP_E_EIGENCOUNT";
    case TSEP_E_RESOLUTION_EXCEEDED: return "TSEP_E_RESOLUTION_EXCEEDED";
    case TSEP_E_INVALID_ARGUMENT: return "TSEP_E_INVALID_ARGUMENT";
    case TSEP_E_IO: return "TSEP_E_IO";
    case TSEP_E_INTERNAL: return "TSEP_E_INTERNAL";
  }
  return "TSEP_E_INTERNAL";
}

tsep_status tsep_spacetime_load(const char* path, tsep_spacetime** out) {
  if (!path || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    auto handle = new tsep_spacetime{tsep::SpacetimeSpec::load(path)};
    *out = handle;
  });
}

tsep_status tsep_spacetime_parse(const char* toml_text,
                                 const char* source_name,
                                 tsep_spacetime** out) {
  if (!toml_text || !out) return invalid("null argument");
  *out = nullptr;
  return guarded([&] {
    auto handle = new tsep_spacetime{tsep::SpacetimeSpec::load_from_string(
        toml_text, source_name ? source_name : "<memory>")};
    *out = handle;
  });
}

void tsep_spacetime_free(tsep_spacetime* spacetime) { delete spacetime; }

const char* tsep_spacetime_name(const tsep_spacetime* spacetime) {
  return spacetime ? spacetime->spec.name().c_str() : "";
}

tsep_status tsep_metric_at(const tsep_spacetime* spacetime,
                           const double point[4], double out[16]) {
  if (!spacetime || !point || !out) return invalid("null argument");
  return guarded(
      [&] { form_out(spacetime->spec.metric_at(to_point(point)), out); });
}

tsep_status tsep_riemann_at(const tsep_spacetime* spacetime,
                            const double point[4], double out[16]) {
  if (!spacetime || !point || !out) return invalid("null argument");
  return guarded(
      [&] { form_out(spacetime->spec.riemann_at(to_point(point)), out); });
}

tsep_status tsep_time_line_at(const tsep_spacetime* spacetime,
                              const double point[4], double direction[4],
                              double* eigenvalue, double* gap,
                              int* low_confidence) {
  if (!spacetime || !point || !direction) return invalid("null argument");
  return guarded([&] {
    line_out(tsep::line_at(spacetime->spec, to_point(point)), direction,
             eigenvalue, gap, low_confidence);
  });
}

tsep_status tsep_christoffel_at(const tsep_spacetime* spacetime,
                                const double point[4], double gamma[64]) {
  if (!spacetime || !point || !gamma) return invalid("null argument");
  return guarded([&] {
    const tsep::ChristoffelField field =
        tsep::christoffel_at(spacetime->spec, to_point(point));
    for (int mu = 0; mu < 4; ++mu) {
      for (int nu = 0; nu < 4; ++nu) {
        for (int rho = 0; rho < 4; ++rho) {
          gamma[(mu * 4 + nu) * 4 + rho] = field.gamma[mu][nu][rho];
        }
      }
    }
  });
}

tsep_status tsep_space_frame_at(const tsep_spacetime* spacetime,
                                const double point[4], double frame[12]) {
  if (!spacetime || !point || !frame) return invalid("null argument");
  return guarded([&] {
    const std::array<tsep::Vec4, 3> f =
        tsep::space_frame_at(spacetime->spec, to_point(point));
    for (int i = 0; i < 3; ++i) {
      for (int k = 0; k < 4; ++k) frame[i * 4 + k] = f[i][k];
    }
  });
}

tsep_status tsep_riemann_from_timelike(const double g[16], const double v[4],
                                       double tol, double h_out[16]) {
  if (!g || !v || !h_out) return invalid("null argument");
  return guarded([&] {
    const tsep::SymmetricForm4 gf = tsep::SymmetricForm4::from_matrix(g);
    form_out(tsep::riemann_from_timelike(gf, to_point(v), tol), h_out);
  });
}

tsep_status tsep_timelike_from_riemann(const double g[16], const double h[16],
                                       double tol, double direction[4],
                                       double* eigenvalue, double* gap,
                                       int* low_confidence) {
  if (!g || !h || !direction) return invalid("null argument");
  return guarded([&] {
    const tsep::SymmetricForm4 gf = tsep::SymmetricForm4::from_matrix(g);
    const tsep::SymmetricForm4 hf = tsep::SymmetricForm4::from_matrix(h);
    line_out(tsep::timelike_from_riemann(gf, hf, tol), direction, eigenvalue,
             gap, low_confidence);
  });
}

tsep_status tsep_loop_holonomy(const tsep_spacetime* spacetime,
                               const char* loop_name, int n_samples,
                               int* holonomy, int* samples_used,
                               double* min_alignment) {
  if (!spacetime || !loop_name || !holonomy) return invalid("null argument");
  return guarded([&] {
    const tsep::LoopCurve* loop = spacetime->spec.find_loop(loop_name);
    if (!loop) {
      tsep::fail(tsep::ErrorCode::InvalidArgument,
                 std::string("no loop named '") + loop_name + "'");
    }
    const tsep::HolonomyResult r =
        tsep::holonomy(spacetime->spec, *loop, n_samples);
    *holonomy = r.holonomy;
    if (samples_used) *samples_used = r.samples_used;
    if (min_alignment) *min_alignment = r.min_alignment;
  });
}

tsep_status tsep_time_derivative(const tsep_spacetime* spacetime,
                                 const char* multiplier,
                                 const char* const field[4],
                                 const double point[4], double out[4]) {
  if (!spacetime || !multiplier || !field || !point || !out) {
    return invalid("null argument");
  }
  return guarded([&] {
    tsep::Expr m;
    try {
      m = tsep::parse_expression(multiplier);
    } catch (const tsep::Error& e) {
      tsep::fail(e.code(), std::string("multiplier: ") + e.what());
    }
    const tsep::Vec4 d = tsep::time_derivative(spacetime->spec, m,
                                               to_field(field),
                                               to_point(point));
    for (int i = 0; i < 4; ++i) out[i] = d[i];
  });
}

tsep_status tsep_space_derivative(const tsep_spacetime* spacetime,
                                  const char* const coeffs[3],
                                  const char* const field[4],
                                  const double point[4], double out[4]) {
  if (!spacetime || !coeffs || !field || !point || !out) {
    return invalid("null argument");
  }
  return guarded([&] {
    std::array<tsep::Expr, 3> c;
    for (int i = 0; i < 3; ++i) {
      if (!coeffs[i]) {
        tsep::fail(tsep::ErrorCode::InvalidArgument,
                   "frame coefficient " + std::to_string(i) + " is null");
      }
      try {
        c[i] = tsep::parse_expression(coeffs[i]);
      } catch (const tsep::Error& e) {
        tsep::fail(e.code(),
                   "frame coefficient " + std::to_string(i) + ": " + e.what());
      }
    }
    const tsep::Vec4 d = tsep::space_derivative(spacetime->spec, c,
                                                to_field(field),
                                                to_point(point));
    for (int i = 0; i < 4; ++i) out[i] = d[i];
  });
}

tsep_status tsep_report_validate(const char* spec_path, int samples,
                                 uint64_t seed, char** json_out,
                                 int* exit_status) {
  if (!spec_path || !json_out) return invalid("null argument");
  return guarded([&] {
    report_out(tsep::report::run_validate(spec_path, samples, seed), json_out,
               exit_status);
  });
}

tsep_status tsep_report_split(const char* spec_path, const char* point,
                              double tol, char** json_out, int* exit_status) {
  if (!spec_path || !point || !json_out) return invalid("null argument");
  return guarded([&] {
    report_out(tsep::report::run_split(spec_path, point, tol), json_out,
               exit_status);
  });
}

tsep_status tsep_report_orient(const char* spec_path, int n_samples,
                               char** json_out, int* exit_status) {
  if (!spec_path || !json_out) return invalid("null argument");
  return guarded([&] {
    report_out(tsep::report::run_orient(spec_path, n_samples), json_out,
               exit_status);
  });
}

tsep_status tsep_report_section(const char* spec_path, const char* multiplier,
                                const char* grid, char** json_out,
                                int* exit_status) {
  if (!spec_path || !multiplier || !grid || !json_out) {
    return invalid("null argument");
  }
  return guarded([&] {
    report_out(tsep::report::run_section(spec_path, multiplier, grid),
               json_out, exit_status);
  });
}

tsep_status tsep_report_derive(const char* spec_path, const char* mode,
                               const char* section, const char* field,
                               const char* point, int verbose,
                               char** json_out, int* exit_status) {
  if (!spec_path || !mode || !section || !field || !point || !json_out) {
    return invalid("null argument");
  }
  return guarded([&] {
    report_out(tsep::report::run_derive(spec_path, mode, section, field,
                                        point, verbose != 0),
               json_out, exit_status);
  });
}

tsep_status tsep_report_christoffel(const char* spec_path, const char* point,
                                    char** json_out, int* exit_status) {
  if (!spec_path || !point || !json_out) return invalid("null argument");
  return guarded([&] {
    report_out(tsep::report::run_christoffel(spec_path, point), json_out,
               exit_status);
  });
}

void tsep_string_free(char* s) { std::free(s); }

}  // extern "C"
