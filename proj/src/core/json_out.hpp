#pragma once

#include <string>

#include "json.hpp"

namespace tsep {

// Reports are built as ordered_json so keys serialize in insertion
// order; combined with the fixed float formatting below, identical
// invocations produce byte-identical output.
using Json = nlohmann::ordered_json;

// %.17g (shortest round-trippable form is not stable across libC++
// versions; 17 significant digits are), with -0 canonicalized to 0.
std::string format_double(double v);

// Compact single-line serialization with the formatting above. Rejects
// non-finite numbers, which have no JSON representation.
std::string dump_deterministic(const Json& j);

}  // namespace tsep
