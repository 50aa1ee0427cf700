#include <cmath>
#include <string>

#include "core/time_bundle.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace tsep;
using namespace tsep::testing;

namespace {

SpacetimeSpec load_fixture(const char* name) {
  return SpacetimeSpec::load(fixture_path(name));
}

int count_flips(const TransportResult& t) {
  int flips = 0;
  for (const auto& s : t.samples) {
    if (s.local_sign == -1) ++flips;
  }
  return flips;
}

// Rotating-block metric whose line field turns by pi/2 inside a window
// of width ~1e-9 around theta = 3: smooth in exact arithmetic, but far
// too fast for any sampling resolution the transport is allowed.
const char* kFastTwist =
    "name = \"fast_twist\"\n"
    "coords = [\"a\", \"b\", \"theta\", \"z\"]\n"
    "[periodic]\ntheta = 6.283185307179586\n"
    "[box]\n"
    "a = [-1.0, 1.0]\nb = [-1.0, 1.0]\n"
    "theta = [0.0, 6.283185307179586]\nz = [-1.0, 1.0]\n"
    "[metric]\n"
    "g00 = \"-cos((pi/2)*(1 + tanh(1000000000*(theta - 3))))\"\n"
    "g01 = \"-sin((pi/2)*(1 + tanh(1000000000*(theta - 3))))\"\n"
    "g11 = \"cos((pi/2)*(1 + tanh(1000000000*(theta - 3))))\"\n"
    "g22 = \"1\"\ng33 = \"1\"\n"
    "[[loop]]\nname = \"around\"\nparam = \"s\"\n"
    "curve = [\"0\", \"0\", \"2*pi*s\", \"0\"]\n";

}  // namespace

TEST_CASE("transport constants freeze the refinement contract") {
  CHECK(kAlignmentThreshold == 0.1);
  CHECK(kMaxTransportSamples == 16384);
}

TEST_CASE("line_at on the fixtures") {
  const auto mink = load_fixture("minkowski.toml");
  const TimeLine flat = line_at(mink, Point{0.3, -1, 0.5, 2});
  CHECK(flat.direction == Vec4{1, 0, 0, 0});
  CHECK(flat.eigenvalue == doctest::Approx(-1.0));

  const auto cone = load_fixture("cone_cylinder.toml");
  const TimeLine mid = line_at(cone, Point{0, 0, M_PI, 0});
  // Block angle theta/2 = pi/2: the line is the b-axis.
  CHECK(std::abs(mid.direction[0]) < 1e-12);
  CHECK(mid.direction[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(mid.eigenvalue == doctest::Approx(-1.0).epsilon(1e-12));

  const auto sch = load_fixture("schwarzschild.toml");
  const TimeLine outside = line_at(sch, Point{0, 4, M_PI / 2, 0});
  CHECK(outside.direction == Vec4{1, 0, 0, 0});
  CHECK(outside.eigenvalue == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("transport on a constant field keeps every sign") {
  const auto mink = load_fixture("minkowski.toml");
  const LoopCurve* loop = mink.find_loop("xy_circle");
  REQUIRE(loop != nullptr);
  const TransportResult t = transport_line(mink, *loop, 16);
  CHECK(t.samples_used == 16);
  CHECK(t.samples.size() == 17);
  CHECK(count_flips(t) == 0);
  CHECK(t.min_alignment == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(t.any_low_confidence);
  CHECK(t.samples.front().param == 0.0);
  CHECK(t.samples.back().param == 1.0);
}

TEST_CASE("transport around the cone sees exactly one flip") {
  const auto cone = load_fixture("cone_cylinder.toml");
  const LoopCurve* loop = cone.find_loop("theta_loop");
  REQUIRE(loop != nullptr);

  const TransportResult t = transport_line(cone, *loop, 64);
  CHECK(t.samples_used == 64);
  // The canonical representative flips once, where the rotating line
  // crosses the tie between its two leading components.
  CHECK(count_flips(t) == 1);
  CHECK(t.min_alignment > 0.99);
}

TEST_CASE("transport rejects too-coarse sampling") {
  const auto mink = load_fixture("minkowski.toml");
  try {
    transport_line(mink, *mink.find_loop("xy_circle"), 4);
    FAIL("expected InvalidArgument");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("holonomy of the declared loops") {
  const auto mink = load_fixture("minkowski.toml");
  CHECK(holonomy(mink, *mink.find_loop("xy_circle"), 64).holonomy == 1);

  const auto cone = load_fixture("cone_cylinder.toml");
  const HolonomyResult once =
      holonomy(cone, *cone.find_loop("theta_loop"), 64);
  CHECK(once.holonomy == -1);
  CHECK(once.loop == "theta_loop");
  CHECK(once.samples_used == 64);

  const HolonomyResult twice =
      holonomy(cone, *cone.find_loop("theta_loop_twice"), 64);
  CHECK(twice.holonomy == 1);

  const auto sch = load_fixture("schwarzschild.toml");
  CHECK(holonomy(sch, *sch.find_loop("phi_loop"), 64).holonomy == 1);
}

TEST_CASE("holonomy is stable under sample doubling") {
  const auto cone = load_fixture("cone_cylinder.toml");
  for (int n = 64; n <= 1024; n *= 2) {
    CHECK(holonomy(cone, *cone.find_loop("theta_loop"), n).holonomy == -1);
    CHECK(holonomy(cone, *cone.find_loop("theta_loop_twice"), n).holonomy ==
          1);
  }
}

TEST_CASE("holonomy of the reversed loop is unchanged") {
  const auto cone = load_fixture("cone_cylinder.toml");
  LoopCurve reversed;
  reversed.name = "theta_loop_reversed";
  reversed.param = "s";
  reversed.components = {parse_expression("0"), parse_expression("0"),
                         parse_expression("2*pi*(1 - s)"),
                         parse_expression("0")};
  CHECK(holonomy(cone, reversed, 64).holonomy == -1);
}

TEST_CASE("orientability verdicts") {
  const auto mink = load_fixture("minkowski.toml");
  const OrientabilityVerdict ok = orientability(mink, 64);
  CHECK_FALSE(ok.not_orientable);
  CHECK(std::string(ok.verdict()) == "Orientable-on-tested-loops");

  const auto cone = load_fixture("cone_cylinder.toml");
  const OrientabilityVerdict bad = orientability(cone, 64);
  CHECK(bad.not_orientable);
  CHECK(std::string(bad.verdict()) == "NotOrientable");
  REQUIRE(bad.loops.size() == 2);
  CHECK(bad.loops[0].holonomy == -1);
  CHECK(bad.loops[1].holonomy == 1);

  // Declaring only the squared loop knows nothing of the twist: the
  // verdict name carries the caveat.
  const auto partial = load_fixture("cone_cylinder_doubleloop.toml");
  const OrientabilityVerdict blind = orientability(partial, 64);
  CHECK_FALSE(blind.not_orientable);
}

TEST_CASE("a line field varying too fast exhausts refinement") {
  const auto spec = SpacetimeSpec::load_from_string(kFastTwist, "fast_twist");
  try {
    holonomy(spec, *spec.find_loop("around"), 64);
    FAIL("expected ResolutionExceeded");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ResolutionExceeded);
  }
}

TEST_CASE("parse_grid understands fixed and ranged axes") {
  const auto cone = load_fixture("cone_cylinder.toml");
  const SectionGrid grid =
      parse_grid(cone, "theta=0:2*pi:512, a=0, b=0, z=0");
  CHECK(grid.total_points == 512);
  CHECK(grid.axes[0].fixed);
  CHECK(grid.axes[2].coord == "theta");
  CHECK_FALSE(grid.axes[2].fixed);
  CHECK(grid.axes[2].n == 512);
  CHECK(grid.axes[2].hi == doctest::Approx(2 * M_PI));

  const SectionGrid multi =
      parse_grid(cone, "a=-1:1:4,b=-1:1:4,theta=1,z=0:1:2");
  CHECK(multi.total_points == 32);
}

TEST_CASE("parse_grid rejects malformed descriptions") {
  const auto cone = load_fixture("cone_cylinder.toml");
  auto code = [&](const std::string& text) {
    try {
      parse_grid(cone, text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Internal;
  };

  CHECK(code("theta=0:2*pi:512,a=0,b=0") == ErrorCode::ParseError);  // no z
  CHECK(code("q=0:1:4,a=0,b=0,z=0") == ErrorCode::UnknownCoordinate);
  CHECK(code("theta=0:1:4,theta=0,a=0,b=0") == ErrorCode::ParseError);
  CHECK(code("theta=1:0:4,a=0,b=0,z=0") == ErrorCode::ParseError);
  CHECK(code("theta=0:1:0,a=0,b=0,z=0") == ErrorCode::ParseError);
  CHECK(code("theta=0:1:2.5,a=0,b=0,z=0") == ErrorCode::ParseError);
  CHECK(code("theta=0:1,a=0,b=0,z=0") == ErrorCode::ParseError);
  CHECK(code("theta=0:q:4,a=0,b=0,z=0") == ErrorCode::ParseError);
  // Total cap: 2^20 points.
  CHECK(code("a=0:1:128,b=0:1:128,theta=0:1:128,z=0:1:128") ==
        ErrorCode::InvalidArgument);
}

TEST_CASE("evaluate_section on a constant multiplier") {
  const auto mink = load_fixture("minkowski.toml");
  const SectionGrid grid = parse_grid(mink, "t=0,x=-1:1:8,y=0,z=0");
  const SectionReport report =
      evaluate_section(mink, parse_expression("1"), grid);
  CHECK(report.total_points == 8);
  CHECK(report.zero_nodes == 0);
  CHECK(report.findings.empty());
  CHECK(report.max_abs_multiplier == 1.0);
  CHECK_FALSE(report.values_truncated);
  REQUIRE(report.values.size() == 8);
  for (const auto& sample : report.values) {
    CHECK(sample.value == Vec4{1, 0, 0, 0});
    CHECK_FALSE(sample.zero);
  }
}

TEST_CASE("evaluate_section finds the cosine nodes") {
  const auto cone = load_fixture("cone_cylinder.toml");
  const SectionGrid grid = parse_grid(cone, "theta=0:2*pi:512,a=0,b=0,z=0");
  const SectionReport report =
      evaluate_section(cone, parse_expression("cos(theta)"), grid);

  CHECK(report.total_points == 512);
  CHECK(report.zero_nodes == 2);
  REQUIRE(report.findings.size() == 2);
  const double step = 2 * M_PI / 512;
  CHECK(report.findings[0].kind == "node");
  CHECK(std::abs(report.findings[0].from[2] - M_PI / 2) < step);
  CHECK(report.findings[1].kind == "node");
  CHECK(std::abs(report.findings[1].from[2] - 3 * M_PI / 2) < step);
  // The grid hits the roots dead on: cos evaluates below tolerance.
  CHECK(std::abs(report.findings[0].value_from) < report.zero_tol);
  CHECK(report.values_truncated);
  CHECK(report.values.size() == 16);
}

TEST_CASE("evaluate_section zero multiplier reports one region") {
  const auto cone = load_fixture("cone_cylinder.toml");
  const SectionGrid grid = parse_grid(cone, "theta=0:2*pi:64,a=0,b=0,z=0");
  const SectionReport report =
      evaluate_section(cone, parse_expression("0"), grid);
  CHECK(report.zero_nodes == 64);
  REQUIRE(report.findings.size() == 1);
  CHECK(report.findings[0].kind == "region");
  CHECK(report.findings[0].count == 64);
}

TEST_CASE("evaluate_section brackets transversal sign changes") {
  const auto cone = load_fixture("cone_cylinder.toml");
  const SectionGrid grid = parse_grid(cone, "theta=0:2*pi:512,a=0,b=0,z=0");
  const SectionReport report =
      evaluate_section(cone, parse_expression("theta - 3"), grid);
  CHECK(report.zero_nodes == 0);
  REQUIRE(report.findings.size() == 1);
  CHECK(report.findings[0].kind == "bracket");
  CHECK(report.findings[0].count == 0);
  CHECK(report.findings[0].from[2] < 3.0);
  CHECK(report.findings[0].to[2] > 3.0);
  CHECK(report.findings[0].value_from < 0.0);
  CHECK(report.findings[0].value_to > 0.0);
}

TEST_CASE("evaluate_section rejects unknown names in the multiplier") {
  const auto mink = load_fixture("minkowski.toml");
  const SectionGrid grid = parse_grid(mink, "t=0,x=-1:1:4,y=0,z=0");
  try {
    evaluate_section(mink, parse_expression("q + 1"), grid);
    FAIL("expected UnknownCoordinate");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownCoordinate);
  }
}
