#pragma once

#include <string>
#include <vector>

#include "core/separation.hpp"
#include "core/spacetime.hpp"

namespace tsep {

// Time line field evaluated at one curve sample. The line itself is
// sign-free; local_sign records the representative flip applied relative
// to the previous sample during transport.
struct LineFieldSample {
  Point point{};
  double param = 0;
  TimeLine line;
  int local_sign = 1;
};

struct TransportResult {
  std::vector<LineFieldSample> samples;  // n+1 entries, both endpoints
  int samples_used = 0;                  // final n after refinement
  double min_alignment = 0;              // min |h(v_i, v_i+1)| seen
  bool any_low_confidence = false;       // some sample had a poor eigen gap
};

struct HolonomyResult {
  std::string loop;
  int holonomy = 1;  // +1 trivial over the loop, -1 nontrivial
  int samples_used = 0;
  double min_alignment = 0;
  bool any_low_confidence = false;
};

struct OrientabilityVerdict {
  std::vector<HolonomyResult> loops;
  bool not_orientable = false;

  // "Orientable-on-tested-loops" is deliberate: declared loops stand in
  // for generators of H_1(M; Z/2), which we cannot verify.
  const char* verdict() const {
    return not_orientable ? "NotOrientable" : "Orientable-on-tested-loops";
  }
};

// Transport refinement bounds. A genuine half-turn between consecutive
// samples cannot keep |h(v_i, v_i+1)| above the threshold once the
// sampling is fine enough; if alignment still fails at the cap the line
// field varies too fast (or is discontinuous) on the curve.
inline constexpr double kAlignmentThreshold = 0.1;
inline constexpr int kMaxTransportSamples = 1 << 14;

// The timelike eigendirection field at a point (canonical representative).
TimeLine line_at(const SpacetimeSpec& spec, const Point& p);

// Samples the curve at n_samples+1 parameters in [0,1] and aligns
// consecutive line representatives, doubling the sampling on poor
// alignment up to kMaxTransportSamples. Requires n_samples >= 8.
TransportResult transport_line(const SpacetimeSpec& spec,
                               const LoopCurve& curve, int n_samples);

// Z/2 holonomy of the time line bundle over a closed loop: the product
// of transport signs times the closing sign at the shared endpoint.
HolonomyResult holonomy(const SpacetimeSpec& spec, const LoopCurve& loop,
                        int n_samples);

// Holonomy of every declared loop plus the orientability verdict.
OrientabilityVerdict orientability(const SpacetimeSpec& spec, int n_samples);

// One axis of a sampling grid. Ranges are half-open: n points at
// lo + k*(hi-lo)/n for k = 0..n-1. Fixed axes hold a single value.
struct SectionGridAxis {
  std::string coord;
  double lo = 0;
  double hi = 0;
  long n = 1;
  bool fixed = true;
};

struct SectionGrid {
  std::array<SectionGridAxis, 4> axes;  // in the spec's coordinate order
  long total_points = 1;
};

// Parses "coord=lo:hi:n,coord=value,..." covering all four coordinates.
SectionGrid parse_grid(const SpacetimeSpec& spec, const std::string& text);

// A zero-set finding: an isolated node, a contiguous run of zero nodes,
// or a sign-change bracket between adjacent non-zero nodes.
struct ZeroFinding {
  std::string kind;  // "node" | "region" | "bracket"
  Point from{};
  Point to{};
  long count = 0;        // zero nodes covered (bracket: 0)
  double value_from = 0;  // multiplier at from
  double value_to = 0;    // multiplier at to
};

struct SectionSample {
  Point point{};
  double multiplier = 0;
  Vec4 direction{};  // canonical time line representative
  Vec4 value{};      // multiplier * direction
  bool zero = false;
};

struct SectionReport {
  long total_points = 0;
  long zero_nodes = 0;
  double max_abs_multiplier = 0;
  double zero_tol = 0;
  std::vector<ZeroFinding> findings;
  std::vector<SectionSample> values;  // capped preview, grid order
  bool values_truncated = false;
  bool any_preview_low_confidence = false;
};

// Evaluates the partial time orientation s = multiplier * (canonical
// line representative) over the grid. Nodes with |multiplier| <=
// zero_tol are the points where past and future are indistinguishable;
// runs of zero nodes are merged, and strict sign changes between
// adjacent nonzero nodes along the innermost varying axis are bracketed.
SectionReport evaluate_section(const SpacetimeSpec& spec,
                               const Expr& multiplier,
                               const SectionGrid& grid);

}  // namespace tsep
