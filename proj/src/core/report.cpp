#include "core/report.hpp"

#include <vector>

#include "core/covariant.hpp"
#include "core/json_out.hpp"
#include "core/separation.hpp"
#include "core/spacetime.hpp"
#include "core/time_bundle.hpp"

namespace tsep::report {

namespace {

Json json_vec(const Vec4& v) {
  Json a = Json::array();
  for (double c : v) a.push_back(c);
  return a;
}

Json json_gamma(const ChristoffelField& c) {
  Json mu_arr = Json::array();
  for (int mu = 0; mu < 4; ++mu) {
    Json nu_arr = Json::array();
    for (int nu = 0; nu < 4; ++nu) {
      Json rho_arr = Json::array();
      for (int rho = 0; rho < 4; ++rho) {
        rho_arr.push_back(c.gamma[mu][nu][rho]);
      }
      nu_arr.push_back(std::move(rho_arr));
    }
    mu_arr.push_back(std::move(nu_arr));
  }
  return mu_arr;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  size_t start = 0;
  while (true) {
    const size_t comma = text.find(',', start);
    if (comma == std::string::npos) {
      parts.push_back(text.substr(start));
      return parts;
    }
    parts.push_back(text.substr(start, comma - start));
    start = comma + 1;
  }
}

double constant_value(const std::string& text, const std::string& context) {
  try {
    return parse_expression(text).eval({});
  } catch (const Error& e) {
    fail(ErrorCode::ParseError, context + ": " + e.what());
  }
}

Point parse_point(const std::string& text) {
  const std::vector<std::string> parts = split_list(text);
  if (parts.size() != 4) {
    fail(ErrorCode::ParseError,
         "point must have 4 comma-separated components, got " +
             std::to_string(parts.size()));
  }
  Point p;
  for (int i = 0; i < 4; ++i) {
    p[i] = constant_value(parts[i], "point component " + std::to_string(i));
  }
  return p;
}

VectorField parse_field(const std::string& text,
                        std::vector<std::string>* echo) {
  const std::vector<std::string> parts = split_list(text);
  if (parts.size() != 4) {
    fail(ErrorCode::ParseError,
         "field must have 4 comma-separated components, got " +
             std::to_string(parts.size()));
  }
  VectorField f;
  for (int i = 0; i < 4; ++i) {
    try {
      f[i] = parse_expression(parts[i]);
    } catch (const Error& e) {
      fail(e.code(), "field component " + std::to_string(i) + ": " + e.what());
    }
    if (echo) echo->push_back(parts[i]);
  }
  return f;
}

// Shared envelope + error handling. The body fills in spec name,
// results, warnings, and (optionally) a non-default exit status.
template <typename Body>
Outcome run_command(const char* command, Body&& body) {
  std::string spec_name;
  Json results;
  Json error;
  std::vector<std::string> warnings;
  int exit_status = kExitOk;

  try {
    body(spec_name, results, warnings, exit_status);
  } catch (const Error& e) {
    error = Json{{"code", error_code_name(e.code())}, {"message", e.what()}};
    results = nullptr;
    exit_status = kExitError;
  } catch (const std::exception& e) {
    error = Json{{"code", "Internal"}, {"message", e.what()}};
    results = nullptr;
    exit_status = kExitError;
  }

  Json j;
  j["command"] = command;
  j["spec"] = spec_name.empty() ? Json(nullptr) : Json(spec_name);
  j["results"] = results.is_null() ? Json(nullptr) : results;
  j["warnings"] = warnings;
  if (!error.is_null()) j["error"] = error;
  j["exit_status"] = exit_status;
  return {dump_deterministic(j), exit_status};
}

const char* kLoopCaveat =
    "verdict covers only the declared loops; a loop outside the tested set "
    "could still carry holonomy -1";

const char* kGapWarning =
    "eigenvalue gap is below 1e-8 of the spectrum scale; the time "
    "direction is poorly conditioned";

}  // namespace

Outcome run_validate(const std::string& spec_path, int samples,
                     uint64_t seed) {
  return run_command("validate", [&](std::string& spec_name, Json& results,
                                     std::vector<std::string>& warnings,
                                     int& exit_status) {
    const SpacetimeSpec spec = SpacetimeSpec::load(spec_path);
    spec_name = spec.name();
    const ValidationReport r = validate(spec, samples, seed);

    results["samples_requested"] = r.requested;
    results["samples_tested"] = r.tested;
    results["rejected_by_exclusions"] = r.rejected_by_exclusions;
    Json violations = Json::array();
    for (const ValidationIssue& issue : r.issues) {
      violations.push_back(Json{{"point", json_vec(issue.point)},
                                {"kind", issue.kind},
                                {"detail", issue.detail}});
    }
    results["violations"] = std::move(violations);

    if (r.tested < r.requested) {
      warnings.push_back("only " + std::to_string(r.tested) + " of " +
                         std::to_string(r.requested) +
                         " sample points passed the exclusions");
    }
    if (!r.ok()) exit_status = kExitError;
  });
}

Outcome run_split(const std::string& spec_path, const std::string& point_text,
                  double tol) {
  return run_command("split", [&](std::string& spec_name, Json& results,
                                  std::vector<std::string>& warnings, int&) {
    const SpacetimeSpec spec = SpacetimeSpec::load(spec_path);
    spec_name = spec.name();
    const Point p = parse_point(point_text);

    const SymmetricForm4 g = spec.metric_at(p);
    const SymmetricForm4 h = spec.riemann_at(p);
    const TimeLine line = timelike_from_riemann(g, h, tol);

    results["point"] = json_vec(p);
    results["eigenvalue"] = line.eigenvalue;
    results["gap"] = line.gap;
    results["low_confidence"] = line.low_confidence;
    results["direction"] = json_vec(line.direction);
    results["causal_class"] =
        causal_class_name(classify(g, line.direction));
    results["g_of_direction"] =
        evaluate_form(g, line.direction, line.direction);

    if (line.low_confidence) warnings.push_back(kGapWarning);
  });
}

Outcome run_orient(const std::string& spec_path, int n_samples) {
  return run_command("orient", [&](std::string& spec_name, Json& results,
                                   std::vector<std::string>& warnings,
                                   int& exit_status) {
    const SpacetimeSpec spec = SpacetimeSpec::load(spec_path);
    spec_name = spec.name();
    const OrientabilityVerdict v = orientability(spec, n_samples);

    results["n_samples"] = n_samples;
    Json loops = Json::array();
    for (const HolonomyResult& hr : v.loops) {
      loops.push_back(Json{{"name", hr.loop},
                           {"holonomy", hr.holonomy},
                           {"samples_used", hr.samples_used},
                           {"min_alignment", hr.min_alignment}});
      if (hr.any_low_confidence) {
        warnings.push_back("loop '" + hr.loop + "': " + kGapWarning);
      }
    }
    results["loops"] = std::move(loops);
    results["verdict"] = v.verdict();

    if (v.not_orientable) {
      exit_status = kExitNotOrientable;
    } else {
      warnings.push_back(kLoopCaveat);
    }
  });
}

Outcome run_section(const std::string& spec_path,
                    const std::string& multiplier_text,
                    const std::string& grid_text) {
  return run_command("section", [&](std::string& spec_name, Json& results,
                                    std::vector<std::string>& warnings,
                                    int&) {
    const SpacetimeSpec spec = SpacetimeSpec::load(spec_path);
    spec_name = spec.name();

    Expr multiplier;
    try {
      multiplier = parse_expression(multiplier_text);
    } catch (const Error& e) {
      fail(e.code(), std::string("multiplier: ") + e.what());
    }
    const SectionGrid grid = parse_grid(spec, grid_text);
    const SectionReport r = evaluate_section(spec, multiplier, grid);

    results["multiplier"] = multiplier_text;
    Json axes = Json::array();
    for (const SectionGridAxis& ax : grid.axes) {
      axes.push_back(Json{{"coord", ax.coord},
                          {"lo", ax.lo},
                          {"hi", ax.hi},
                          {"n", ax.n}});
    }
    results["grid"] = std::move(axes);
    results["total_points"] = r.total_points;
    results["max_abs_multiplier"] = r.max_abs_multiplier;
    results["zero_tol"] = r.zero_tol;
    results["zero_nodes"] = r.zero_nodes;

    Json findings = Json::array();
    for (const ZeroFinding& f : r.findings) {
      findings.push_back(Json{{"kind", f.kind},
                              {"from", json_vec(f.from)},
                              {"to", json_vec(f.to)},
                              {"count", f.count},
                              {"value_from", f.value_from},
                              {"value_to", f.value_to}});
    }
    results["findings"] = std::move(findings);

    Json values = Json::array();
    for (const SectionSample& s : r.values) {
      values.push_back(Json{{"point", json_vec(s.point)},
                            {"multiplier", s.multiplier},
                            {"direction", json_vec(s.direction)},
                            {"value", json_vec(s.value)},
                            {"zero", s.zero}});
    }
    results["values"] = std::move(values);
    results["values_truncated"] = r.values_truncated;

    if (r.any_preview_low_confidence) warnings.push_back(kGapWarning);
  });
}

Outcome run_derive(const std::string& spec_path, const std::string& mode,
                   const std::string& section_text,
                   const std::string& field_text,
                   const std::string& point_text, bool verbose) {
  return run_command("derive", [&](std::string& spec_name, Json& results,
                                   std::vector<std::string>& warnings,
                                   int&) {
    const SpacetimeSpec spec = SpacetimeSpec::load(spec_path);
    spec_name = spec.name();
    const Point p = parse_point(point_text);
    std::vector<std::string> field_echo;
    const VectorField f = parse_field(field_text, &field_echo);

    results["mode"] = mode;
    results["coords"] = spec.coords();
    results["point"] = json_vec(p);
    results["field"] = field_echo;

    Vec4 s_value{};
    Vec4 derivative{};
    if (mode == "time") {
      Expr multiplier;
      try {
        multiplier = parse_expression(section_text);
      } catch (const Error& e) {
        fail(e.code(), std::string("multiplier: ") + e.what());
      }
      results["multiplier"] = section_text;
      const TimeLine line = line_at(spec, p);
      if (line.low_confidence) warnings.push_back(kGapWarning);
      s_value = vec_scale(multiplier.eval(spec.binding_at(p)),
                          line.direction);
      derivative = time_derivative(spec, multiplier, f, p);
    } else if (mode == "space") {
      const std::vector<std::string> parts = split_list(section_text);
      if (parts.size() != 3) {
        fail(ErrorCode::ParseError,
             "space mode needs 3 comma-separated frame coefficients, got " +
                 std::to_string(parts.size()));
      }
      std::array<Expr, 3> coeffs;
      for (int i = 0; i < 3; ++i) {
        try {
          coeffs[i] = parse_expression(parts[i]);
        } catch (const Error& e) {
          fail(e.code(),
               "frame coefficient " + std::to_string(i) + ": " + e.what());
        }
      }
      results["coeffs"] = parts;
      const std::array<Vec4, 3> frame = space_frame_at(spec, p);
      Json frame_json = Json::array();
      for (const Vec4& v : frame) frame_json.push_back(json_vec(v));
      results["frame"] = std::move(frame_json);
      const Binding b = spec.binding_at(p);
      for (int i = 0; i < 3; ++i) {
        s_value = vec_add(s_value, vec_scale(coeffs[i].eval(b), frame[i]));
      }
      derivative = space_derivative(spec, coeffs, f, p);
    } else {
      fail(ErrorCode::InvalidArgument,
           "mode must be 'time' or 'space', got '" + mode + "'");
    }

    results["s_at_point"] = json_vec(s_value);
    results["derivative"] = json_vec(derivative);
    if (verbose) {
      results["christoffel"] = json_gamma(christoffel_at(spec, p));
    }
  });
}

Outcome run_christoffel(const std::string& spec_path,
                        const std::string& point_text) {
  return run_command("christoffel", [&](std::string& spec_name, Json& results,
                                        std::vector<std::string>&, int&) {
    const SpacetimeSpec spec = SpacetimeSpec::load(spec_path);
    spec_name = spec.name();
    const Point p = parse_point(point_text);
    const ChristoffelField c = christoffel_at(spec, p);

    results["coords"] = spec.coords();
    results["point"] = json_vec(p);
    results["gamma"] = json_gamma(c);
    results["max_abs"] = c.max_abs();
    results["lower_symmetry_residual"] = c.lower_symmetry_residual();
  });
}

}  // namespace tsep::report
