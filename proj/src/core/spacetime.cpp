#include "core/spacetime.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "core/rng.hpp"
#include "core/toml_lite.hpp"

namespace tsep {

namespace {

bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') {
    return false;
  }
  return std::all_of(s.begin(), s.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

void check_name_usable(const std::string& s, const std::string& role) {
  if (!is_identifier(s)) {
    fail(ErrorCode::ParseError, role + " '" + s + "' is not an identifier");
  }
  if (s == "pi" || s == "e") {
    fail(ErrorCode::ParseError,
         role + " '" + s + "' collides with a built-in constant");
  }
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Expression source from a TOML value: strings are parsed as written,
// bare numbers become literals.
std::string expr_text(const toml::Value& v, const std::string& context) {
  if (v.is_string()) return v.as_string(context);
  if (v.is_number()) return format_g17(v.as_number(context));
  fail(ErrorCode::ParseError,
       context + ": expected an expression string or number");
}

Expr parse_component(const std::string& text, const std::string& context) {
  try {
    return parse_expression(text);
  } catch (const Error& e) {
    fail(e.code(), context + ": " + e.what());
  }
}

void check_free_vars(const Expr& e, const std::set<std::string>& allowed,
                     const std::string& context) {
  for (const auto& var : e.free_variables()) {
    if (!allowed.count(var)) {
      fail(ErrorCode::UnknownCoordinate,
           context + ": unknown name '" + var + "'");
    }
  }
}

std::string point_str(const Point& p) {
  std::string s = "(";
  for (int i = 0; i < 4; ++i) {
    if (i) s += ", ";
    s += format_g17(p[i]);
  }
  return s + ")";
}

}  // namespace

int SpacetimeSpec::upper_index(int i, int j) {
  if (i > j) std::swap(i, j);
  static constexpr int row_start[4] = {0, 4, 7, 9};
  return row_start[i] + (j - i);
}

int SpacetimeSpec::coord_index(const std::string& name) const {
  for (int i = 0; i < 4; ++i) {
    if (coords_[i] == name) return i;
  }
  return -1;
}

std::optional<double> SpacetimeSpec::period_of(int coord) const {
  return periods_[coord];
}

std::optional<std::pair<double, double>> SpacetimeSpec::box_of(
    int coord) const {
  return box_[coord];
}

bool SpacetimeSpec::has_full_box() const {
  return std::all_of(box_.begin(), box_.end(),
                     [](const auto& b) { return b.has_value(); });
}

const LoopCurve* SpacetimeSpec::find_loop(const std::string& name) const {
  for (const auto& loop : loops_) {
    if (loop.name == name) return &loop;
  }
  return nullptr;
}

const Expr& SpacetimeSpec::g_component(int i, int j) const {
  return g_[upper_index(i, j)];
}

const Expr& SpacetimeSpec::h_component(int i, int j) const {
  return h_[upper_index(i, j)];
}

const Expr& SpacetimeSpec::g_partial(int i, int j, int k) const {
  return g_partials_[upper_index(i, j)][k];
}

Binding SpacetimeSpec::binding_at(const Point& p) const {
  Binding b = params_;
  for (int i = 0; i < 4; ++i) b[coords_[i]] = p[i];
  return b;
}

bool SpacetimeSpec::is_excluded(const Point& p, std::string* which) const {
  const Binding b = binding_at(p);
  for (const auto& [expr, text] : exclusions_) {
    bool bad = false;
    try {
      bad = !(expr.eval(b) > 0.0);
    } catch (const Error&) {
      bad = true;  // a predicate that cannot be evaluated excludes the point
    }
    if (bad) {
      if (which) *which = text;
      return true;
    }
  }
  return false;
}

void SpacetimeSpec::require_valid_point(const Point& p) const {
  require_finite(p, "point");
  std::string which;
  if (is_excluded(p, &which)) {
    fail(ErrorCode::ExcludedPoint,
         "point " + point_str(p) + " violates exclusion '" + which + "' > 0");
  }
}

SymmetricForm4 SpacetimeSpec::eval_form(const std::array<Expr, 10>& entries,
                                        const Point& p,
                                        const char* what) const {
  const Binding b = binding_at(p);
  SymmetricForm4 f;
  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      try {
        f.set(i, j, entries[upper_index(i, j)].eval(b));
      } catch (const Error& e) {
        fail(e.code(), std::string(what) + " component (" +
                           std::to_string(i) + "," + std::to_string(j) +
                           ") at " + point_str(p) + ": " + e.what());
      }
    }
  }
  return f;
}

SymmetricForm4 SpacetimeSpec::metric_at(const Point& p) const {
  require_valid_point(p);
  const SymmetricForm4 g = eval_form(g_, p, "metric");
  const Signature sig = signature(g);
  if (!(sig == kLorentzianSignature)) {
    fail(ErrorCode::WrongSignature,
         "metric signature at " + point_str(p) + " is " + sig.str() +
             ", expected (1,0,3)");
  }
  return g;
}

SymmetricForm4 SpacetimeSpec::riemann_at(const Point& p) const {
  require_valid_point(p);
  const SymmetricForm4 h = eval_form(h_, p, "riemannian");
  const Signature sig = signature(h);
  if (!(sig == kRiemannianSignature)) {
    fail(ErrorCode::NotRiemannian,
         "riemannian metric signature at " + point_str(p) + " is " +
             sig.str() + ", expected (0,0,4)");
  }
  return h;
}

Point SpacetimeSpec::loop_point(const LoopCurve& loop, double s) const {
  Binding b = params_;
  b[loop.param] = s;
  Point p;
  for (int i = 0; i < 4; ++i) {
    try {
      p[i] = loop.components[i].eval(b);
    } catch (const Error& e) {
      fail(e.code(), "loop '" + loop.name + "' component " +
                         std::to_string(i) + " at parameter " +
                         format_g17(s) + ": " + e.what());
    }
  }
  return p;
}

SpacetimeSpec SpacetimeSpec::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    fail(ErrorCode::Io, "cannot open spec file '" + path + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_from_string(ss.str(), path);
}

SpacetimeSpec SpacetimeSpec::load_from_string(const std::string& toml_text,
                                              const std::string& source_name) {
  const toml::Table doc = toml::parse(toml_text, source_name);
  SpacetimeSpec spec;

  // Reject unknown structure early so typos do not silently change the
  // geometry.
  for (const auto& [key, value] : doc.values) {
    if (key != "name" && key != "coords" && key != "exclude") {
      fail(ErrorCode::ParseError, "unrecognized top-level key '" + key + "'");
    }
  }
  for (const auto& [key, table] : doc.tables) {
    if (key != "periodic" && key != "params" && key != "box" &&
        key != "metric" && key != "riemann") {
      fail(ErrorCode::ParseError, "unrecognized table [" + key + "]");
    }
  }
  for (const auto& [key, arr] : doc.table_arrays) {
    if (key != "loop") {
      fail(ErrorCode::ParseError, "unrecognized array of tables [[" + key +
                                      "]]");
    }
  }

  const toml::Value* name_v = doc.find("name");
  if (!name_v) fail(ErrorCode::ParseError, "missing top-level key 'name'");
  spec.name_ = name_v->as_string("name");

  const toml::Value* coords_v = doc.find("coords");
  if (!coords_v) fail(ErrorCode::ParseError, "missing top-level key 'coords'");
  const toml::Array& coords_arr = coords_v->as_array("coords");
  if (coords_arr.size() != 4) {
    fail(ErrorCode::ParseError, "'coords' must list exactly 4 names, got " +
                                    std::to_string(coords_arr.size()));
  }
  for (int i = 0; i < 4; ++i) {
    spec.coords_[i] = coords_arr[i].as_string("coords");
    check_name_usable(spec.coords_[i], "coordinate");
    for (int j = 0; j < i; ++j) {
      if (spec.coords_[j] == spec.coords_[i]) {
        fail(ErrorCode::ParseError,
             "duplicate coordinate name '" + spec.coords_[i] + "'");
      }
    }
  }

  if (const toml::Table* params = doc.find_table("params")) {
    for (const auto& [key, value] : params->values) {
      check_name_usable(key, "parameter");
      if (spec.coord_index(key) >= 0) {
        fail(ErrorCode::ParseError,
             "parameter '" + key + "' collides with a coordinate");
      }
      spec.params_[key] = value.as_number("params." + key);
    }
  }

  if (const toml::Table* periodic = doc.find_table("periodic")) {
    for (const auto& [key, value] : periodic->values) {
      const int idx = spec.coord_index(key);
      if (idx < 0) {
        fail(ErrorCode::UnknownCoordinate,
             "periodic: unknown coordinate '" + key + "'");
      }
      const double period = value.as_number("periodic." + key);
      if (!(period > 0.0)) {
        fail(ErrorCode::ParseError,
             "period of '" + key + "' must be positive");
      }
      spec.periods_[idx] = period;
    }
  }

  if (const toml::Table* box = doc.find_table("box")) {
    for (const auto& [key, value] : box->values) {
      const int idx = spec.coord_index(key);
      if (idx < 0) {
        fail(ErrorCode::UnknownCoordinate,
             "box: unknown coordinate '" + key + "'");
      }
      const toml::Array& range = value.as_array("box." + key);
      if (range.size() != 2) {
        fail(ErrorCode::ParseError, "box." + key + " must be [lo, hi]");
      }
      const double lo = range[0].as_number("box." + key);
      const double hi = range[1].as_number("box." + key);
      if (!(lo < hi)) {
        fail(ErrorCode::ParseError, "box." + key + ": lo must be < hi");
      }
      spec.box_[idx] = {lo, hi};
    }
  }

  std::set<std::string> point_names;
  for (const auto& c : spec.coords_) point_names.insert(c);
  for (const auto& [k, v] : spec.params_) point_names.insert(k);

  if (const toml::Value* exclude_v = doc.find("exclude")) {
    for (const toml::Value& item : exclude_v->as_array("exclude")) {
      const std::string text = expr_text(item, "exclude");
      Expr e = parse_component(text, "exclude '" + text + "'");
      check_free_vars(e, point_names, "exclude '" + text + "'");
      spec.exclusions_.emplace_back(std::move(e), text);
    }
  }

  // Metric components. Upper and lower triangle keys are both accepted;
  // when both are present their source text must agree.
  const toml::Table* metric = doc.find_table("metric");
  if (!metric) fail(ErrorCode::ParseError, "missing [metric] table");

  auto load_form = [&](const toml::Table& table, char prefix,
                       std::array<Expr, 10>& out) {
    std::array<std::optional<std::string>, 16> text;
    for (const auto& [key, value] : table.values) {
      if (key.size() != 3 || key[0] != prefix ||
          !std::isdigit(static_cast<unsigned char>(key[1])) ||
          !std::isdigit(static_cast<unsigned char>(key[2]))) {
        fail(ErrorCode::ParseError,
             std::string("unrecognized component key '") + key + "'");
      }
      const int i = key[1] - '0';
      const int j = key[2] - '0';
      if (i > 3 || j > 3) {
        fail(ErrorCode::ParseError,
             std::string("component key '") + key + "' is out of range");
      }
      text[i * 4 + j] = expr_text(value, std::string("component ") + key);
    }
    for (int i = 0; i < 4; ++i) {
      for (int j = i; j < 4; ++j) {
        const auto& upper = text[i * 4 + j];
        const auto& lower = text[j * 4 + i];
        if (i != j && upper && lower && *upper != *lower) {
          fail(ErrorCode::AsymmetricMetric,
               std::string("components ") + prefix + std::to_string(i) +
                   std::to_string(j) + " and " + prefix + std::to_string(j) +
                   std::to_string(i) + " are both given and differ");
        }
        std::string source;
        if (upper) {
          source = *upper;
        } else if (lower) {
          source = *lower;
        } else if (i == j) {
          fail(ErrorCode::ParseError,
               std::string("missing diagonal component ") + prefix +
                   std::to_string(i) + std::to_string(i));
        } else {
          source = "0";
        }
        const std::string context = std::string("component ") + prefix +
                                    std::to_string(i) + std::to_string(j);
        Expr e = parse_component(source, context);
        check_free_vars(e, point_names, context);
        out[upper_index(i, j)] = std::move(e);
      }
    }
  };

  load_form(*metric, 'g', spec.g_);

  if (const toml::Table* riemann = doc.find_table("riemann")) {
    spec.has_custom_riemann_ = true;
    load_form(*riemann, 'h', spec.h_);
  } else {
    for (int i = 0; i < 4; ++i) {
      for (int j = i; j < 4; ++j) {
        spec.h_[upper_index(i, j)] = Expr::number(i == j ? 1.0 : 0.0);
      }
    }
  }

  for (int i = 0; i < 4; ++i) {
    for (int j = i; j < 4; ++j) {
      for (int k = 0; k < 4; ++k) {
        spec.g_partials_[upper_index(i, j)][k] =
            differentiate(spec.g_[upper_index(i, j)], spec.coords_[k]);
      }
    }
  }

  auto loops_it = doc.table_arrays.find("loop");
  if (loops_it != doc.table_arrays.end()) {
    for (const toml::Table& entry : loops_it->second) {
      LoopCurve loop;
      for (const auto& [key, value] : entry.values) {
        if (key != "name" && key != "param" && key != "curve") {
          fail(ErrorCode::ParseError,
               "unrecognized loop key '" + key + "'");
        }
      }
      const toml::Value* nv = entry.find("name");
      if (!nv) fail(ErrorCode::ParseError, "loop is missing 'name'");
      loop.name = nv->as_string("loop.name");
      const toml::Value* pv = entry.find("param");
      if (!pv) {
        fail(ErrorCode::ParseError, "loop '" + loop.name +
                                        "' is missing 'param'");
      }
      loop.param = pv->as_string("loop.param");
      check_name_usable(loop.param, "loop parameter");
      if (spec.coord_index(loop.param) >= 0 ||
          spec.params_.count(loop.param)) {
        fail(ErrorCode::ParseError,
             "loop parameter '" + loop.param +
                 "' collides with a coordinate or parameter");
      }
      const toml::Value* cv = entry.find("curve");
      if (!cv) {
        fail(ErrorCode::ParseError,
             "loop '" + loop.name + "' is missing 'curve'");
      }
      const toml::Array& comps = cv->as_array("loop.curve");
      if (comps.size() != 4) {
        fail(ErrorCode::ParseError,
             "loop '" + loop.name + "' curve must have 4 components");
      }
      std::set<std::string> loop_names;
      loop_names.insert(loop.param);
      for (const auto& [k, v] : spec.params_) loop_names.insert(k);
      for (int i = 0; i < 4; ++i) {
        const std::string context =
            "loop '" + loop.name + "' component " + std::to_string(i);
        Expr e = parse_component(expr_text(comps[i], context), context);
        check_free_vars(e, loop_names, context);
        loop.components[i] = std::move(e);
      }
      if (spec.find_loop(loop.name)) {
        fail(ErrorCode::ParseError, "duplicate loop name '" + loop.name + "'");
      }
      spec.loops_.push_back(std::move(loop));
    }
  }

  // Loop closure: endpoints must agree modulo declared periods.
  for (const auto& loop : spec.loops_) {
    const Point p0 = spec.loop_point(loop, 0.0);
    const Point p1 = spec.loop_point(loop, 1.0);
    for (int i = 0; i < 4; ++i) {
      double delta = p1[i] - p0[i];
      double scale = std::max({1.0, std::abs(p0[i]), std::abs(p1[i])});
      if (spec.periods_[i]) {
        const double period = *spec.periods_[i];
        delta -= std::round(delta / period) * period;
        scale = std::max(scale, period);
      }
      if (std::abs(delta) > 1e-12 * scale) {
        fail(ErrorCode::InvalidArgument,
             "loop '" + loop.name + "' is not closed in coordinate '" +
                 spec.coords_[i] + "': endpoints differ by " +
                 format_g17(delta));
      }
    }
  }

  return spec;
}

ValidationReport validate(const SpacetimeSpec& spec, int samples,
                          uint64_t seed) {
  if (samples <= 0) {
    fail(ErrorCode::InvalidArgument, "sample count must be positive");
  }
  if (!spec.has_full_box()) {
    fail(ErrorCode::InvalidArgument,
         "spec has no sampling box for every coordinate");
  }

  ValidationReport report;
  report.requested = samples;
  Rng rng(seed);

  const long max_attempts = static_cast<long>(samples) * 100;
  long attempts = 0;
  while (report.tested < samples && attempts < max_attempts) {
    ++attempts;
    Point p;
    for (int i = 0; i < 4; ++i) {
      const auto [lo, hi] = *spec.box_of(i);
      p[i] = rng.uniform(lo, hi);
    }
    if (spec.is_excluded(p)) {
      ++report.rejected_by_exclusions;
      continue;
    }
    ++report.tested;
    try {
      spec.metric_at(p);
    } catch (const Error& e) {
      report.issues.push_back({p, error_code_name(e.code()), e.what()});
    }
    try {
      spec.riemann_at(p);
    } catch (const Error& e) {
      report.issues.push_back({p, error_code_name(e.code()), e.what()});
    }
  }
  return report;
}

}  // namespace tsep
