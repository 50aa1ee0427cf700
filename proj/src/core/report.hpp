#pragma once

#include <cstdint>
#include <string>

namespace tsep::report {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitNotOrientable = 2;

// A finished report: machine-readable JSON plus the process exit status.
// Errors never throw out of the runners; they become an "error" object
// in the report with exit status 1.
struct Outcome {
  std::string json;
  int exit_status = kExitOk;
};

// Point, field, and coefficient arguments arrive as comma-separated
// constant expressions ("0,4,pi/2,0"), so callers stay string-only.

Outcome run_validate(const std::string& spec_path, int samples,
                     uint64_t seed);
Outcome run_split(const std::string& spec_path, const std::string& point_text,
                  double tol);  // tol < 0 selects the default
Outcome run_orient(const std::string& spec_path, int n_samples);
Outcome run_section(const std::string& spec_path,
                    const std::string& multiplier_text,
                    const std::string& grid_text);
Outcome run_derive(const std::string& spec_path, const std::string& mode,
                   const std::string& section_text,
                   const std::string& field_text,
                   const std::string& point_text, bool verbose);
Outcome run_christoffel(const std::string& spec_path,
                        const std::string& point_text);

}  // namespace tsep::report
