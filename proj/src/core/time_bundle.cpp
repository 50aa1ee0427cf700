#include "core/time_bundle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <utility>

namespace tsep {

namespace {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double grid_number(const std::string& text, const std::string& context) {
  try {
    return parse_expression(text).eval({});
  } catch (const Error& e) {
    fail(ErrorCode::ParseError, context + ": " + e.what());
  }
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Point grid_point(const SectionGrid& grid, long flat) {
  Point p;
  for (int i = 3; i >= 0; --i) {
    const SectionGridAxis& ax = grid.axes[i];
    const long k = flat % ax.n;
    flat /= ax.n;
    p[i] = ax.fixed ? ax.lo : ax.lo + double(k) * (ax.hi - ax.lo) / double(ax.n);
  }
  return p;
}

}  // namespace

TimeLine line_at(const SpacetimeSpec& spec, const Point& p) {
  return timelike_from_riemann(spec.metric_at(p), spec.riemann_at(p));
}

TransportResult transport_line(const SpacetimeSpec& spec,
                               const LoopCurve& curve, int n_samples) {
  if (n_samples < 8) {
    fail(ErrorCode::InvalidArgument,
         "transport needs at least 8 samples, got " +
             std::to_string(n_samples));
  }

  int n = n_samples;
  for (;;) {
    TransportResult result;
    result.samples.reserve(n + 1);
    result.samples_used = n;
    result.min_alignment = std::numeric_limits<double>::infinity();

    bool aligned = true;
    Vec4 prev{};  // canonical representative at the previous sample
    for (int k = 0; k <= n; ++k) {
      const double s = double(k) / double(n);
      LineFieldSample sample;
      sample.param = s;
      sample.point = spec.loop_point(curve, s);
      sample.line = line_at(spec, sample.point);
      if (sample.line.low_confidence) result.any_low_confidence = true;
      if (k > 0) {
        const SymmetricForm4 h = spec.riemann_at(sample.point);
        const double a = evaluate_form(h, prev, sample.line.direction);
        if (std::abs(a) < kAlignmentThreshold) {
          aligned = false;
          break;
        }
        result.min_alignment = std::min(result.min_alignment, std::abs(a));
        sample.local_sign = a >= 0.0 ? 1 : -1;
      }
      prev = sample.line.direction;
      result.samples.push_back(std::move(sample));
    }
    if (aligned) return result;

    if (2 * n > kMaxTransportSamples) {
      fail(ErrorCode::ResolutionExceeded,
           "line field alignment on curve '" + curve.name +
               "' still below " + format_value(kAlignmentThreshold) + " at " +
               std::to_string(n) +
               " samples; the field varies too fast or is discontinuous");
    }
    n *= 2;
  }
}

HolonomyResult holonomy(const SpacetimeSpec& spec, const LoopCurve& loop,
                        int n_samples) {
  const TransportResult t = transport_line(spec, loop, n_samples);

  int product = 1;
  for (const auto& sample : t.samples) product *= sample.local_sign;

  // Close the loop: the endpoints are the same manifold point (modulo
  // periods), so the transported representative must align with the
  // canonical representative where transport started.
  const LineFieldSample& first = t.samples.front();
  const LineFieldSample& last = t.samples.back();
  const SymmetricForm4 h0 = spec.riemann_at(first.point);
  const Vec4 rep_last = vec_scale(double(product), last.line.direction);
  const double closing = evaluate_form(h0, rep_last, first.line.direction);
  if (std::abs(closing) < kAlignmentThreshold) {
    fail(ErrorCode::ResolutionExceeded,
         "line field at the endpoints of loop '" + loop.name +
             "' does not match (alignment " + format_value(closing) +
             "); the metric may not respect the declared periods");
  }

  HolonomyResult result;
  result.loop = loop.name;
  result.holonomy = closing > 0.0 ? 1 : -1;
  result.samples_used = t.samples_used;
  result.min_alignment = std::min(t.min_alignment, std::abs(closing));
  result.any_low_confidence = t.any_low_confidence;
  return result;
}

OrientabilityVerdict orientability(const SpacetimeSpec& spec, int n_samples) {
  OrientabilityVerdict verdict;
  for (const LoopCurve& loop : spec.loops()) {
    verdict.loops.push_back(holonomy(spec, loop, n_samples));
    if (verdict.loops.back().holonomy == -1) verdict.not_orientable = true;
  }
  return verdict;
}

SectionGrid parse_grid(const SpacetimeSpec& spec, const std::string& text) {
  SectionGrid grid;
  for (int i = 0; i < 4; ++i) grid.axes[i].coord = spec.coords()[i];
  std::array<bool, 4> seen{};

  size_t start = 0;
  while (start <= text.size()) {
    size_t comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = trim(text.substr(start, comma - start));
    start = comma + 1;
    if (item.empty()) {
      fail(ErrorCode::ParseError, "grid: empty item");
    }

    const size_t eq = item.find('=');
    if (eq == std::string::npos) {
      fail(ErrorCode::ParseError,
           "grid item '" + item + "' must be coord=value or coord=lo:hi:n");
    }
    const std::string name = trim(item.substr(0, eq));
    const std::string rest = trim(item.substr(eq + 1));
    const int idx = spec.coord_index(name);
    if (idx < 0) {
      fail(ErrorCode::UnknownCoordinate,
           "grid: unknown coordinate '" + name + "'");
    }
    if (seen[idx]) {
      fail(ErrorCode::ParseError,
           "grid: coordinate '" + name + "' given twice");
    }
    seen[idx] = true;

    std::vector<std::string> parts;
    size_t pstart = 0;
    while (true) {
      size_t colon = rest.find(':', pstart);
      if (colon == std::string::npos) {
        parts.push_back(trim(rest.substr(pstart)));
        break;
      }
      parts.push_back(trim(rest.substr(pstart, colon - pstart)));
      pstart = colon + 1;
    }

    SectionGridAxis& ax = grid.axes[idx];
    if (parts.size() == 1) {
      ax.lo = ax.hi = grid_number(parts[0], "grid " + name);
      ax.n = 1;
      ax.fixed = true;
    } else if (parts.size() == 3) {
      ax.lo = grid_number(parts[0], "grid " + name + " lower bound");
      ax.hi = grid_number(parts[1], "grid " + name + " upper bound");
      if (!(ax.lo < ax.hi)) {
        fail(ErrorCode::ParseError,
             "grid " + name + ": lower bound must be below upper bound");
      }
      const double nv = grid_number(parts[2], "grid " + name + " count");
      if (!(nv >= 1.0) || nv != std::nearbyint(nv) || nv > double(1L << 20)) {
        fail(ErrorCode::ParseError,
             "grid " + name + ": count must be an integer in [1, 2^20]");
      }
      ax.n = long(nv);
      ax.fixed = false;
    } else {
      fail(ErrorCode::ParseError,
           "grid item '" + item + "' must be coord=value or coord=lo:hi:n");
    }
    if (comma == text.size()) break;
  }

  for (int i = 0; i < 4; ++i) {
    if (!seen[i]) {
      fail(ErrorCode::ParseError,
           "grid: coordinate '" + spec.coords()[i] + "' not given");
    }
  }

  grid.total_points = 1;
  for (const auto& ax : grid.axes) {
    grid.total_points *= ax.n;
    if (grid.total_points > (1L << 20)) {
      fail(ErrorCode::InvalidArgument,
           "grid has more than 2^20 points");
    }
  }
  return grid;
}

SectionReport evaluate_section(const SpacetimeSpec& spec,
                               const Expr& multiplier,
                               const SectionGrid& grid) {
  std::set<std::string> allowed;
  for (const auto& c : spec.coords()) allowed.insert(c);
  for (const auto& [k, v] : spec.params()) allowed.insert(k);
  for (const auto& var : multiplier.free_variables()) {
    if (!allowed.count(var)) {
      fail(ErrorCode::UnknownCoordinate,
           "section multiplier: unknown name '" + var + "'");
    }
  }

  SectionReport report;
  report.total_points = grid.total_points;

  std::vector<double> m(grid.total_points);
  Binding binding = spec.params();
  for (long flat = 0; flat < grid.total_points; ++flat) {
    const Point p = grid_point(grid, flat);
    spec.require_valid_point(p);
    for (int i = 0; i < 4; ++i) binding[spec.coords()[i]] = p[i];
    m[flat] = multiplier.eval(binding);
    report.max_abs_multiplier =
        std::max(report.max_abs_multiplier, std::abs(m[flat]));
  }
  report.zero_tol = 1e-9 * report.max_abs_multiplier;

  std::vector<char> zero(grid.total_points);
  for (long flat = 0; flat < grid.total_points; ++flat) {
    zero[flat] = std::abs(m[flat]) <= report.zero_tol;
    if (zero[flat]) ++report.zero_nodes;
  }

  // Adjacent flat indices walk the innermost varying axis; a carry into
  // an outer axis breaks the run.
  long inner_n = 1;
  for (int i = 3; i >= 0; --i) {
    if (grid.axes[i].n > 1) {
      inner_n = grid.axes[i].n;
      break;
    }
  }
  auto adjacent = [inner_n](long flat) { return flat % inner_n != 0; };

  // Findings keyed by position so runs and brackets interleave in grid
  // order: runs key on 2*start, a bracket between k-1 and k on 2k-1.
  std::vector<std::pair<long, ZeroFinding>> keyed;

  long run_start = -1;
  auto flush_run = [&](long end) {  // run covers [run_start, end]
    ZeroFinding f;
    f.kind = run_start == end ? "node" : "region";
    f.from = grid_point(grid, run_start);
    f.to = grid_point(grid, end);
    f.count = end - run_start + 1;
    f.value_from = m[run_start];
    f.value_to = m[end];
    keyed.emplace_back(2 * run_start, std::move(f));
    run_start = -1;
  };

  for (long flat = 0; flat < grid.total_points; ++flat) {
    const bool joined = flat > 0 && adjacent(flat);
    if (run_start >= 0 && (!zero[flat] || !joined)) flush_run(flat - 1);
    if (joined && !zero[flat - 1] && !zero[flat] &&
        m[flat - 1] * m[flat] < 0.0) {
      ZeroFinding f;
      f.kind = "bracket";
      f.from = grid_point(grid, flat - 1);
      f.to = grid_point(grid, flat);
      f.count = 0;
      f.value_from = m[flat - 1];
      f.value_to = m[flat];
      keyed.emplace_back(2 * flat - 1, std::move(f));
    }
    if (zero[flat] && run_start < 0) run_start = flat;
  }
  if (run_start >= 0) flush_run(grid.total_points - 1);

  std::stable_sort(keyed.begin(), keyed.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& [key, finding] : keyed) {
    report.findings.push_back(std::move(finding));
  }

  const long preview = std::min<long>(grid.total_points, 16);
  for (long flat = 0; flat < preview; ++flat) {
    SectionSample sample;
    sample.point = grid_point(grid, flat);
    sample.multiplier = m[flat];
    const TimeLine line = line_at(spec, sample.point);
    if (line.low_confidence) report.any_preview_low_confidence = true;
    sample.direction = line.direction;
    sample.value = vec_scale(sample.multiplier, sample.direction);
    sample.zero = zero[flat] != 0;
    report.values.push_back(std::move(sample));
  }
  report.values_truncated = preview < grid.total_points;

  return report;
}

}  // namespace tsep
