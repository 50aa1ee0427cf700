#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/bilinear.hpp"
#include "core/expr.hpp"

namespace tsep {

// Coordinate values in the spec's declared order.
using Point = std::array<double, 4>;

// A closed curve given by four coordinate expressions in one parameter
// over [0,1]. Closure modulo declared coordinate periods is checked at
// load time.
struct LoopCurve {
  std::string name;
  std::string param;
  std::array<Expr, 4> components;
};

// Single-chart spacetime description: coordinates (optionally periodic),
// parameters, symbolic Lorentzian metric g, optional Riemannian metric h
// (identity by default), exclusion predicates (each must stay > 0), a
// per-coordinate sampling box, and named loops.
class SpacetimeSpec {
 public:
  static SpacetimeSpec load(const std::string& path);
  static SpacetimeSpec load_from_string(const std::string& toml_text,
                                        const std::string& source_name);

  const std::string& name() const { return name_; }
  const std::array<std::string, 4>& coords() const { return coords_; }
  const std::map<std::string, double>& params() const { return params_; }
  const std::vector<LoopCurve>& loops() const { return loops_; }
  bool has_custom_riemann() const { return has_custom_riemann_; }

  int coord_index(const std::string& name) const;  // -1 if unknown
  std::optional<double> period_of(int coord) const;
  std::optional<std::pair<double, double>> box_of(int coord) const;
  bool has_full_box() const;

  const LoopCurve* find_loop(const std::string& name) const;

  // Upper-triangle metric component expression g_ij (i <= j).
  const Expr& g_component(int i, int j) const;
  const Expr& h_component(int i, int j) const;
  // Symbolic partial d g_ij / d coord_k, prepared at load time.
  const Expr& g_partial(int i, int j, int k) const;

  Binding binding_at(const Point& p) const;

  // Exclusion check: true if some predicate is <= 0 (or fails to
  // evaluate) at p. The failing predicate's text is written to *which.
  bool is_excluded(const Point& p, std::string* which = nullptr) const;
  void require_valid_point(const Point& p) const;  // throws ExcludedPoint

  // Numeric metric at a point; enforces Lorentzian signature (1,0,3).
  SymmetricForm4 metric_at(const Point& p) const;
  // Numeric Riemannian metric at a point; enforces signature (0,0,4).
  SymmetricForm4 riemann_at(const Point& p) const;

  // Evaluates a loop's coordinates at a parameter value.
  Point loop_point(const LoopCurve& loop, double s) const;

 private:
  SpacetimeSpec() = default;
  static int upper_index(int i, int j);
  SymmetricForm4 eval_form(const std::array<Expr, 10>& entries,
                           const Point& p, const char* what) const;

  std::string name_;
  std::array<std::string, 4> coords_;
  std::map<std::string, double> params_;
  std::array<std::optional<double>, 4> periods_;
  std::array<std::optional<std::pair<double, double>>, 4> box_;
  std::vector<std::pair<Expr, std::string>> exclusions_;  // expr + source text
  std::array<Expr, 10> g_;  // upper triangle, row-major
  std::array<Expr, 10> h_;
  std::array<std::array<Expr, 4>, 10> g_partials_;
  std::vector<LoopCurve> loops_;
  bool has_custom_riemann_ = false;
};

struct ValidationIssue {
  Point point{};
  std::string kind;    // error code name
  std::string detail;
};

struct ValidationReport {
  int requested = 0;
  int tested = 0;
  int rejected_by_exclusions = 0;
  std::vector<ValidationIssue> issues;

  bool ok() const { return issues.empty(); }
};

// Samples seeded points in the box minus exclusions and checks the
// signatures of g and h at each. Requires a full sampling box.
ValidationReport validate(const SpacetimeSpec& spec, int samples,
                          uint64_t seed);

}  // namespace tsep
