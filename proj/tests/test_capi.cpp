// Exercises the shared-library surface exactly as an external consumer
// would: opaque handles, raw double arrays, JSON strings.

#include <cmath>
#include <cstring>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "timesep/timesep.h"

namespace {

std::string fixture(const std::string& name) {
  return std::string(TSEP_SPEC_DIR) + "/" + name;
}

struct Handle {
  tsep_spacetime* ptr = nullptr;
  ~Handle() { tsep_spacetime_free(ptr); }
};

}  // namespace

TEST_CASE("load, query, and free a spacetime handle") {
  Handle h;
  REQUIRE(tsep_spacetime_load(fixture("schwarzschild.toml").c_str(), &h.ptr) ==
          TSEP_OK);
  CHECK(std::string(tsep_spacetime_name(h.ptr)) == "schwarzschild");

  const double p[4] = {0, 4, M_PI / 2, 0};
  double g[16];
  REQUIRE(tsep_metric_at(h.ptr, p, g) == TSEP_OK);
  CHECK(g[0] == doctest::Approx(-0.5));
  CHECK(g[5] == doctest::Approx(2.0));
  CHECK(g[10] == doctest::Approx(16.0));
  CHECK(g[15] == doctest::Approx(16.0));
  CHECK(g[1] == 0.0);

  double hm[16];
  REQUIRE(tsep_riemann_at(h.ptr, p, hm) == TSEP_OK);
  CHECK(hm[0] == 1.0);
  CHECK(hm[5] == 1.0);

  double dir[4], eigenvalue, gap;
  int low;
  REQUIRE(tsep_time_line_at(h.ptr, p, dir, &eigenvalue, &gap, &low) ==
          TSEP_OK);
  CHECK(dir[0] == doctest::Approx(1.0));
  CHECK(eigenvalue == doctest::Approx(-0.5));
  CHECK(gap == doctest::Approx(2.5));
  CHECK(low == 0);
}

TEST_CASE("failure paths set status and message") {
  tsep_spacetime* raw = nullptr;
  CHECK(tsep_spacetime_load(fixture("missing.toml").c_str(), &raw) ==
        TSEP_E_IO);
  CHECK(raw == nullptr);
  CHECK(std::strlen(tsep_last_error()) > 0);

  CHECK(tsep_spacetime_load(nullptr, &raw) == TSEP_E_INVALID_ARGUMENT);
  CHECK(tsep_spacetime_load(fixture("minkowski.toml").c_str(), nullptr) ==
        TSEP_E_INVALID_ARGUMENT);

  Handle h;
  REQUIRE(tsep_spacetime_load(fixture("schwarzschild.toml").c_str(), &h.ptr) ==
          TSEP_OK);
  const double horizon[4] = {0, 2, M_PI / 2, 0};
  double g[16];
  CHECK(tsep_metric_at(h.ptr, horizon, g) == TSEP_E_EXCLUDED_POINT);
  CHECK(std::string(tsep_last_error()).find("exclusion") !=
        std::string::npos);

  CHECK(std::string(tsep_status_name(TSEP_E_EXCLUDED_POINT)) ==
        "TSEP_E_EXCLUDED_POINT");
  CHECK(std::string(tsep_status_name(TSEP_OK)) == "TSEP_OK");
}

TEST_CASE("parse from memory") {
  const char* text =
      "name = \"inline\"\n"
      "coords = [\"t\", \"x\", \"y\", \"z\"]\n"
      "[metric]\n"
      "g00 = \"-1\"\ng11 = \"1\"\ng22 = \"1\"\ng33 = \"1\"\n";
  Handle h;
  REQUIRE(tsep_spacetime_parse(text, "inline", &h.ptr) == TSEP_OK);
  CHECK(std::string(tsep_spacetime_name(h.ptr)) == "inline");

  tsep_spacetime* bad = nullptr;
  CHECK(tsep_spacetime_parse("name = \"x\"\n", "inline", &bad) ==
        TSEP_E_PARSE);
}

TEST_CASE("pointwise algebra without a handle") {
  const double g[16] = {-1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1};
  const double v[4] = {std::cosh(0.5), std::sinh(0.5), 0, 0};
  double h[16];
  REQUIRE(tsep_riemann_from_timelike(g, v, -1.0, h) == TSEP_OK);
  CHECK(h[0] == doctest::Approx(std::cosh(1.0)));
  CHECK(h[1] == doctest::Approx(-std::sinh(1.0)));
  CHECK(h[4] == h[1]);
  CHECK(h[10] == doctest::Approx(1.0));

  double dir[4], eigenvalue, gap;
  int low;
  REQUIRE(tsep_timelike_from_riemann(g, h, -1.0, dir, &eigenvalue, &gap,
                                     &low) == TSEP_OK);
  CHECK(eigenvalue == doctest::Approx(-1.0));
  // Recovered line is the boost direction, up to h-normalization.
  CHECK(dir[1] / dir[0] == doctest::Approx(std::tanh(0.5)).epsilon(1e-10));

  const double null_v[4] = {1, 1, 0, 0};
  CHECK(tsep_riemann_from_timelike(g, null_v, -1.0, h) ==
        TSEP_E_NOT_TIMELIKE);
}

TEST_CASE("holonomy through the C surface") {
  Handle h;
  REQUIRE(tsep_spacetime_load(fixture("cone_cylinder.toml").c_str(), &h.ptr) ==
          TSEP_OK);
  int holonomy = 0, used = 0;
  double align = 0;
  REQUIRE(tsep_loop_holonomy(h.ptr, "theta_loop", 64, &holonomy, &used,
                             &align) == TSEP_OK);
  CHECK(holonomy == -1);
  CHECK(used == 64);
  CHECK(align > 0.9);

  CHECK(tsep_loop_holonomy(h.ptr, "no_such_loop", 64, &holonomy, &used,
                           &align) == TSEP_E_INVALID_ARGUMENT);
}

TEST_CASE("derivatives through the C surface") {
  Handle h;
  REQUIRE(tsep_spacetime_load(fixture("minkowski.toml").c_str(), &h.ptr) ==
          TSEP_OK);
  const char* field[4] = {"t", "0", "0", "0"};
  const double p[4] = {1, 2, 3, 4};
  double out[4];
  REQUIRE(tsep_time_derivative(h.ptr, "2", field, p, out) == TSEP_OK);
  CHECK(out[0] == 2.0);
  CHECK(out[1] == 0.0);

  const char* coeffs[3] = {"1", "0", "0"};
  const char* fx[4] = {"x", "0", "0", "0"};
  REQUIRE(tsep_space_derivative(h.ptr, coeffs, fx, p, out) == TSEP_OK);
  CHECK(out[0] == 1.0);

  double frame[12];
  REQUIRE(tsep_space_frame_at(h.ptr, p, frame) == TSEP_OK);
  CHECK(frame[0 * 4 + 1] == 1.0);
  CHECK(frame[1 * 4 + 2] == 1.0);
  CHECK(frame[2 * 4 + 3] == 1.0);

  double gamma[64];
  Handle sch;
  REQUIRE(tsep_spacetime_load(fixture("schwarzschild.toml").c_str(),
                              &sch.ptr) == TSEP_OK);
  const double q[4] = {0, 4, M_PI / 2, 0};
  REQUIRE(tsep_christoffel_at(sch.ptr, q, gamma) == TSEP_OK);
  CHECK(gamma[(1 * 4 + 0) * 4 + 0] == doctest::Approx(0.03125));  // G^r_tt
  CHECK(gamma[(0 * 4 + 0) * 4 + 1] == doctest::Approx(0.125));    // G^t_tr
}

TEST_CASE("reports return CLI-identical JSON") {
  char* json = nullptr;
  int exit_status = -1;
  REQUIRE(tsep_report_orient(fixture("cone_cylinder.toml").c_str(), 256,
                             &json, &exit_status) == TSEP_OK);
  REQUIRE(json != nullptr);
  CHECK(exit_status == 2);

  const auto doc = nlohmann::json::parse(json);
  CHECK(doc.at("command") == "orient");
  CHECK(doc.at("spec") == "cone_cylinder");
  CHECK(doc.at("results").at("verdict") == "NotOrientable");
  CHECK(doc.at("results").at("loops").at(0).at("holonomy") == -1);
  CHECK(doc.at("exit_status") == 2);

  // Determinism: a second run yields byte-identical output.
  char* again = nullptr;
  int exit2 = -1;
  REQUIRE(tsep_report_orient(fixture("cone_cylinder.toml").c_str(), 256,
                             &again, &exit2) == TSEP_OK);
  CHECK(std::string(json) == std::string(again));
  CHECK(exit2 == exit_status);
  tsep_string_free(json);
  tsep_string_free(again);

  // Domain failures are embedded in the report, not returned.
  char* err_json = nullptr;
  int err_exit = -1;
  REQUIRE(tsep_report_split(fixture("schwarzschild.toml").c_str(), "0,2,0,0",
                            -1.0, &err_json, &err_exit) == TSEP_OK);
  const auto err_doc = nlohmann::json::parse(err_json);
  CHECK(err_exit == 1);
  CHECK(err_doc.at("error").at("code") == "ExcludedPoint");
  tsep_string_free(err_json);

  char* sp_json = nullptr;
  int sp_exit = -1;
  REQUIRE(tsep_report_split(fixture("schwarzschild.toml").c_str(),
                            "0,4,pi/2,0", -1.0, &sp_json, &sp_exit) ==
          TSEP_OK);
  const auto sp = nlohmann::json::parse(sp_json);
  CHECK(sp_exit == 0);
  CHECK(sp.at("results").at("eigenvalue") == doctest::Approx(-0.5));
  CHECK(sp.at("results").at("direction").at(0) == doctest::Approx(1.0));
  tsep_string_free(sp_json);

  char* dv_json = nullptr;
  int dv_exit = -1;
  REQUIRE(tsep_report_derive(fixture("minkowski.toml").c_str(), "time", "1",
                             "t,0,0,0", "0,0,0,0", 0, &dv_json,
                             &dv_exit) == TSEP_OK);
  const auto dv = nlohmann::json::parse(dv_json);
  CHECK(dv_exit == 0);
  CHECK(dv.at("results").at("derivative").at(0) == doctest::Approx(1.0));
  tsep_string_free(dv_json);

  CHECK(tsep_report_orient(nullptr, 64, &json, &exit_status) ==
        TSEP_E_INVALID_ARGUMENT);
}
