// Command-line front end. All real work happens behind the C API; this
// file parses arguments, forwards them, and renders the returned JSON
// report either verbatim (--output json) or as human-readable text.

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "timesep/timesep.h"

namespace {

using Json = nlohmann::ordered_json;

struct GlobalOpts {
  std::string output = "text";
  double tol = -1.0;
  uint64_t seed = 0;
};

std::string fmt_num(const Json& j) {
  if (j.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", j.get<double>());
    return buf;
  }
  return j.dump();
}

std::string fmt_vec(const Json& arr) {
  std::string s = "(";
  for (size_t i = 0; i < arr.size(); ++i) {
    if (i) s += ", ";
    s += fmt_num(arr[i]);
  }
  return s + ")";
}

void render_validate(const Json& r) {
  std::printf("  samples requested      : %lld\n",
              r["samples_requested"].get<long long>());
  std::printf("  samples tested         : %lld\n",
              r["samples_tested"].get<long long>());
  std::printf("  rejected by exclusions : %lld\n",
              r["rejected_by_exclusions"].get<long long>());
  const Json& violations = r["violations"];
  std::printf("  violations             : %zu\n", violations.size());
  size_t shown = 0;
  for (const Json& v : violations) {
    if (shown == 10) {
      std::printf("    ... %zu more\n", violations.size() - shown);
      break;
    }
    std::printf("    %s at %s: %s\n", v["kind"].get<std::string>().c_str(),
                fmt_vec(v["point"]).c_str(),
                v["detail"].get<std::string>().c_str());
    ++shown;
  }
}

void render_split(const Json& r) {
  std::printf("  point        : %s\n", fmt_vec(r["point"]).c_str());
  std::printf("  eigenvalue   : %s\n", fmt_num(r["eigenvalue"]).c_str());
  std::printf("  gap          : %s%s\n", fmt_num(r["gap"]).c_str(),
              r["low_confidence"].get<bool>() ? "  (low confidence)" : "");
  std::printf("  direction    : %s\n", fmt_vec(r["direction"]).c_str());
  std::printf("  causal class : %s, g(v,v) = %s\n",
              r["causal_class"].get<std::string>().c_str(),
              fmt_num(r["g_of_direction"]).c_str());
}

void render_orient(const Json& r) {
  for (const Json& loop : r["loops"]) {
    std::printf("  loop %-20s holonomy %+d  (samples %d, min alignment %s)\n",
                (loop["name"].get<std::string>() + ":").c_str(),
                loop["holonomy"].get<int>(), loop["samples_used"].get<int>(),
                fmt_num(loop["min_alignment"]).c_str());
  }
  if (r["loops"].empty()) std::printf("  (no loops declared)\n");
  std::printf("  verdict: %s\n", r["verdict"].get<std::string>().c_str());
}

void render_section(const Json& r) {
  std::printf("  multiplier : %s\n", r["multiplier"].get<std::string>().c_str());
  std::string grid;
  for (const Json& ax : r["grid"]) {
    if (!grid.empty()) grid += ", ";
    grid += ax["coord"].get<std::string>() + "=";
    if (ax["n"].get<long long>() == 1) {
      grid += fmt_num(ax["lo"]);
    } else {
      grid += "[" + fmt_num(ax["lo"]) + ", " + fmt_num(ax["hi"]) + ") n=" +
              std::to_string(ax["n"].get<long long>());
    }
  }
  std::printf("  grid       : %s\n", grid.c_str());
  std::printf("  points %lld, zero nodes %lld (tolerance %s)\n",
              r["total_points"].get<long long>(),
              r["zero_nodes"].get<long long>(),
              fmt_num(r["zero_tol"]).c_str());
  const Json& findings = r["findings"];
  if (findings.empty()) {
    std::printf("  zero set   : empty\n");
  } else {
    std::printf("  zero set   :\n");
    for (const Json& f : findings) {
      const std::string kind = f["kind"].get<std::string>();
      if (kind == "node") {
        std::printf("    node at %s (multiplier %s)\n",
                    fmt_vec(f["from"]).c_str(),
                    fmt_num(f["value_from"]).c_str());
      } else if (kind == "region") {
        std::printf("    region of %lld nodes from %s to %s\n",
                    f["count"].get<long long>(), fmt_vec(f["from"]).c_str(),
                    fmt_vec(f["to"]).c_str());
      } else {
        std::printf("    sign change between %s and %s (%s -> %s)\n",
                    fmt_vec(f["from"]).c_str(), fmt_vec(f["to"]).c_str(),
                    fmt_num(f["value_from"]).c_str(),
                    fmt_num(f["value_to"]).c_str());
      }
    }
  }
  for (const Json& v : r["values"]) {
    std::printf("  s%s = %s%s\n", fmt_vec(v["point"]).c_str(),
                fmt_vec(v["value"]).c_str(),
                v["zero"].get<bool>() ? "  [zero]" : "");
  }
  if (r["values_truncated"].get<bool>()) {
    std::printf("  ... values truncated\n");
  }
}

void render_gamma(const Json& gamma, const Json& coords) {
  bool any = false;
  for (int mu = 0; mu < 4; ++mu) {
    for (int nu = 0; nu < 4; ++nu) {
      for (int rho = nu; rho < 4; ++rho) {
        const double v = gamma[mu][nu][rho].get<double>();
        if (v == 0.0) continue;
        any = true;
        std::printf("    Gamma^%s_{%s %s} = %s\n",
                    coords[mu].get<std::string>().c_str(),
                    coords[nu].get<std::string>().c_str(),
                    coords[rho].get<std::string>().c_str(),
                    fmt_num(gamma[mu][nu][rho]).c_str());
      }
    }
  }
  if (!any) std::printf("    all entries zero\n");
}

void render_derive(const Json& r) {
  std::printf("  mode       : %s\n", r["mode"].get<std::string>().c_str());
  std::printf("  point      : %s\n", fmt_vec(r["point"]).c_str());
  if (r.contains("multiplier")) {
    std::printf("  multiplier : %s\n",
                r["multiplier"].get<std::string>().c_str());
  }
  if (r.contains("coeffs")) {
    std::string coeffs;
    for (const Json& c : r["coeffs"]) {
      if (!coeffs.empty()) coeffs += ", ";
      coeffs += c.get<std::string>();
    }
    std::printf("  coeffs     : %s\n", coeffs.c_str());
  }
  std::string field;
  for (const Json& c : r["field"]) {
    if (!field.empty()) field += ", ";
    field += c.get<std::string>();
  }
  std::printf("  field      : (%s)\n", field.c_str());
  std::printf("  s(p)       : %s\n", fmt_vec(r["s_at_point"]).c_str());
  std::printf("  derivative : %s\n", fmt_vec(r["derivative"]).c_str());
  if (r.contains("christoffel")) {
    std::printf("  christoffel (nonzero entries):\n");
    render_gamma(r["christoffel"], r["coords"]);
  }
}

void render_christoffel(const Json& r) {
  std::printf("  point : %s\n", fmt_vec(r["point"]).c_str());
  std::printf("  max |Gamma| = %s, lower-index symmetry residual = %s\n",
              fmt_num(r["max_abs"]).c_str(),
              fmt_num(r["lower_symmetry_residual"]).c_str());
  std::printf("  nonzero entries:\n");
  render_gamma(r["gamma"], r["coords"]);
}

int emit(char* json_cstr, int exit_status, const GlobalOpts& g) {
  std::string json(json_cstr ? json_cstr : "");
  tsep_string_free(json_cstr);

  if (g.output == "json") {
    std::printf("%s\n", json.c_str());
    return exit_status;
  }

  Json report = Json::parse(json);
  for (const Json& w : report["warnings"]) {
    std::fprintf(stderr, "warning: %s\n", w.get<std::string>().c_str());
  }
  if (report.contains("error")) {
    const Json& e = report["error"];
    std::fprintf(stderr, "error [%s]: %s\n",
                 e["code"].get<std::string>().c_str(),
                 e["message"].get<std::string>().c_str());
    return exit_status;
  }

  const std::string command = report["command"].get<std::string>();
  std::printf("%s: spec '%s'\n", command.c_str(),
              report["spec"].get<std::string>().c_str());
  const Json& r = report["results"];
  if (command == "validate") render_validate(r);
  else if (command == "split") render_split(r);
  else if (command == "orient") render_orient(r);
  else if (command == "section") render_section(r);
  else if (command == "derive") render_derive(r);
  else if (command == "christoffel") render_christoffel(r);
  return exit_status;
}

int fail_status(tsep_status status) {
  std::fprintf(stderr, "error [%s]: %s\n", tsep_status_name(status),
               tsep_last_error());
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"time/space separation of Lorentzian 4-metrics"};
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--output", g.output, "report format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  app.add_option("--tol", g.tol,
                 "override the negative-eigenvalue counting tolerance");
  app.add_option("--seed", g.seed, "seed for sampling commands")
      ->capture_default_str();

  std::string spec_path;
  std::string point;
  std::string multiplier;
  std::string coeffs;
  std::string field;
  std::string grid;
  std::string mode;
  int samples = 1000;
  int loop_samples = 256;
  bool verbose = false;

  CLI::App* validate = app.add_subcommand(
      "validate", "sample the box and check both metric signatures");
  validate->add_option("spec", spec_path, "spacetime spec file")->required();
  validate->add_option("--samples", samples, "points to test")
      ->capture_default_str();

  CLI::App* split = app.add_subcommand(
      "split", "time/space separation at a point");
  split->add_option("spec", spec_path, "spacetime spec file")->required();
  split->add_option("--point", point, "comma-separated coordinates")
      ->required();

  CLI::App* orient = app.add_subcommand(
      "orient", "loop holonomies and time-orientability verdict");
  orient->add_option("spec", spec_path, "spacetime spec file")->required();
  orient->add_option("--samples", loop_samples, "transport samples per loop")
      ->capture_default_str();

  CLI::App* section = app.add_subcommand(
      "section", "evaluate a partial time orientation over a grid");
  section->add_option("spec", spec_path, "spacetime spec file")->required();
  section->add_option("--multiplier", multiplier, "scalar section multiplier")
      ->required();
  section
      ->add_option("--grid", grid,
                   "coord=lo:hi:n or coord=value, comma-separated, all "
                   "four coordinates")
      ->required();

  CLI::App* derive = app.add_subcommand(
      "derive", "covariant derivative along a time or space section");
  derive->add_option("spec", spec_path, "spacetime spec file")->required();
  derive->add_option("--mode", mode, "time or space")
      ->check(CLI::IsMember({"time", "space"}))
      ->required();
  derive->add_option("--multiplier", multiplier,
                     "time mode: scalar section multiplier");
  derive->add_option("--coeffs", coeffs,
                     "space mode: three comma-separated frame coefficients");
  derive->add_option("--field", field, "four comma-separated components")
      ->required();
  derive->add_option("--point", point, "comma-separated coordinates")
      ->required();
  derive->add_flag("--verbose", verbose,
                   "include the Christoffel symbols in the report");

  CLI::App* christoffel = app.add_subcommand(
      "christoffel", "Christoffel symbols at a point");
  christoffel->add_option("spec", spec_path, "spacetime spec file")
      ->required();
  christoffel->add_option("--point", point, "comma-separated coordinates")
      ->required();

  for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  char* json = nullptr;
  int exit_status = 0;
  tsep_status status = TSEP_OK;

  if (app.got_subcommand(validate)) {
    status = tsep_report_validate(spec_path.c_str(), samples, g.seed, &json,
                                  &exit_status);
  } else if (app.got_subcommand(split)) {
    status = tsep_report_split(spec_path.c_str(), point.c_str(), g.tol,
                               &json, &exit_status);
  } else if (app.got_subcommand(orient)) {
    status = tsep_report_orient(spec_path.c_str(), loop_samples, &json,
                                &exit_status);
  } else if (app.got_subcommand(section)) {
    status = tsep_report_section(spec_path.c_str(), multiplier.c_str(),
                                 grid.c_str(), &json, &exit_status);
  } else if (app.got_subcommand(derive)) {
    const std::string& sect = mode == "time" ? multiplier : coeffs;
    if (sect.empty()) {
      std::fprintf(stderr,
                   "error: %s mode requires %s\n", mode.c_str(),
                   mode == "time" ? "--multiplier" : "--coeffs");
      return 1;
    }
    status = tsep_report_derive(spec_path.c_str(), mode.c_str(), sect.c_str(),
                                field.c_str(), point.c_str(), verbose ? 1 : 0,
                                &json, &exit_status);
  } else if (app.got_subcommand(christoffel)) {
    status = tsep_report_christoffel(spec_path.c_str(), point.c_str(), &json,
                                     &exit_status);
  }

  if (status != TSEP_OK) return fail_status(status);
  return emit(json, exit_status, g);
}
