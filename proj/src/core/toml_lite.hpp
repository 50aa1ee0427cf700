#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "core/error.hpp"

namespace tsep::toml {

// Reader for the TOML subset used by spacetime spec files: top-level
// key/value pairs, [table] and [[array-of-table]] headers one level deep,
// strings, numbers, booleans, and (possibly multi-line) arrays. Dotted
// keys, nested tables, dates, and multi-line strings are rejected with a
// clear message.

struct Value;
using Array = std::vector<Value>;

struct Value {
  std::variant<std::string, double, int64_t, bool, Array> data;
  int line = 0;

  bool is_string() const { return std::holds_alternative<std::string>(data); }
  bool is_number() const {
    return std::holds_alternative<double>(data) ||
           std::holds_alternative<int64_t>(data);
  }
  bool is_array() const { return std::holds_alternative<Array>(data); }

  const std::string& as_string(const std::string& context) const;
  double as_number(const std::string& context) const;
  const Array& as_array(const std::string& context) const;
};

struct Table {
  std::map<std::string, Value> values;
  std::map<std::string, Table> tables;
  std::map<std::string, std::vector<Table>> table_arrays;

  const Value* find(const std::string& key) const;
  const Table* find_table(const std::string& key) const;
};

// Parses TOML text. Throws ParseError with line:column positions.
// source_name is used in error messages only.
Table parse(const std::string& text, const std::string& source_name);

}  // namespace tsep::toml
