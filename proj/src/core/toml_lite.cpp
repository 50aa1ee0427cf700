#include "core/toml_lite.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>

namespace tsep::toml {

const std::string& Value::as_string(const std::string& context) const {
  if (!is_string()) {
    fail(ErrorCode::ParseError, context + ": expected a string");
  }
  return std::get<std::string>(data);
}

double Value::as_number(const std::string& context) const {
  if (std::holds_alternative<double>(data)) return std::get<double>(data);
  if (std::holds_alternative<int64_t>(data)) {
    return static_cast<double>(std::get<int64_t>(data));
  }
  fail(ErrorCode::ParseError, context + ": expected a number");
}

const Array& Value::as_array(const std::string& context) const {
  if (!is_array()) {
    fail(ErrorCode::ParseError, context + ": expected an array");
  }
  return std::get<Array>(data);
}

const Value* Table::find(const std::string& key) const {
  auto it = values.find(key);
  return it == values.end() ? nullptr : &it->second;
}

const Table* Table::find_table(const std::string& key) const {
  auto it = tables.find(key);
  return it == tables.end() ? nullptr : &it->second;
}

namespace {

struct Reader {
  const std::string& text;
  const std::string& source;
  size_t pos = 0;
  int line = 1;

  [[noreturn]] void error(const std::string& message) const {
    fail(ErrorCode::ParseError,
         source + ":" + std::to_string(line) + ": " + message);
  }

  bool eof() const { return pos >= text.size(); }
  char peek() const { return text[pos]; }

  char advance() {
    char c = text[pos++];
    if (c == '\n') ++line;
    return c;
  }

  void skip_spaces() {
    while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos;
  }

  // Skips spaces, comments, and newlines.
  void skip_blank() {
    for (;;) {
      skip_spaces();
      if (eof()) return;
      if (peek() == '#') {
        while (!eof() && peek() != '\n') ++pos;
      } else if (peek() == '\n' || peek() == '\r') {
        advance();
      } else {
        return;
      }
    }
  }

  void expect_line_end() {
    skip_spaces();
    if (eof()) return;
    if (peek() == '#') {
      while (!eof() && peek() != '\n') ++pos;
    }
    if (eof()) return;
    if (peek() == '\n' || peek() == '\r') {
      advance();
      return;
    }
    error(std::string("unexpected character '") + peek() +
          "' after value");
  }

  static bool is_bare_key_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  }

  std::string read_key() {
    skip_spaces();
    if (eof()) error("expected a key");
    if (peek() == '"' || peek() == '\'') {
      Value v = read_string();
      return std::get<std::string>(v.data);
    }
    std::string key;
    while (!eof() && is_bare_key_char(peek())) key += advance();
    if (key.empty()) {
      error(std::string("expected a key, found '") + peek() + "'");
    }
    if (!eof() && peek() == '.') {
      error("dotted keys are not supported");
    }
    return key;
  }

  Value read_string() {
    const char quote = advance();
    if (!eof() && peek() == quote && pos + 1 < text.size() &&
        text[pos + 1] == quote) {
      error("multi-line strings are not supported");
    }
    std::string out;
    while (!eof() && peek() != quote) {
      char c = advance();
      if (c == '\n') error("unterminated string");
      if (quote == '"' && c == '\\') {
        if (eof()) error("unterminated escape");
        char esc = advance();
        switch (esc) {
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          default:
            error(std::string("unsupported escape '\\") + esc + "'");
        }
      } else {
        out += c;
      }
    }
    if (eof()) error("unterminated string");
    advance();  // closing quote
    Value v;
    v.data = out;
    v.line = line;
    return v;
  }

  Value read_number() {
    const size_t start = pos;
    if (peek() == '+' || peek() == '-') ++pos;
    bool is_float = false;
    while (!eof()) {
      char c = peek();
      if (std::isdigit(static_cast<unsigned char>(c))) {
        ++pos;
      } else if (c == '.' || c == 'e' || c == 'E') {
        is_float = true;
        ++pos;
        if (!eof() && (peek() == '+' || peek() == '-') &&
            (c == 'e' || c == 'E')) {
          ++pos;
        }
      } else if (c == '_') {
        error("underscores in numbers are not supported");
      } else {
        break;
      }
    }
    const std::string tok = text.substr(start, pos - start);
    Value v;
    v.line = line;
    char* end = nullptr;
    if (is_float) {
      const double d = std::strtod(tok.c_str(), &end);
      if (end != tok.c_str() + tok.size() || !std::isfinite(d)) {
        error("invalid number '" + tok + "'");
      }
      v.data = d;
    } else {
      const long long i = std::strtoll(tok.c_str(), &end, 10);
      if (end != tok.c_str() + tok.size()) {
        error("invalid number '" + tok + "'");
      }
      v.data = static_cast<int64_t>(i);
    }
    return v;
  }

  Value read_value() {
    skip_spaces();
    if (eof()) error("expected a value");
    char c = peek();
    if (c == '"' || c == '\'') return read_string();
    if (c == '[') {
      advance();
      Array arr;
      for (;;) {
        skip_blank();
        if (eof()) error("unterminated array");
        if (peek() == ']') {
          advance();
          break;
        }
        arr.push_back(read_value());
        skip_blank();
        if (eof()) error("unterminated array");
        if (peek() == ',') {
          advance();
        } else if (peek() != ']') {
          error("expected ',' or ']' in array");
        }
      }
      Value v;
      v.data = std::move(arr);
      v.line = line;
      return v;
    }
    if (c == '+' || c == '-' || c == '.' ||
        std::isdigit(static_cast<unsigned char>(c))) {
      return read_number();
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::string word;
      while (!eof() && is_bare_key_char(peek())) word += advance();
      if (word == "true" || word == "false") {
        Value v;
        v.data = (word == "true");
        v.line = line;
        return v;
      }
      error("unsupported value '" + word + "' (strings must be quoted)");
    }
    error(std::string("unexpected character '") + c + "'");
  }

  Table parse_document() {
    Table root;
    Table* current = &root;
    skip_blank();
    while (!eof()) {
      if (peek() == '[') {
        advance();
        const bool is_array = !eof() && peek() == '[';
        if (is_array) advance();
        std::string name = read_key();
        skip_spaces();
        if (eof() || peek() != ']') error("expected ']' in table header");
        advance();
        if (is_array) {
          if (eof() || peek() != ']') {
            error("expected ']]' in array-of-tables header");
          }
          advance();
        }
        if (is_array) {
          if (root.tables.count(name)) {
            error("'" + name + "' is already a table");
          }
          current = &root.table_arrays[name].emplace_back();
        } else {
          if (root.tables.count(name)) {
            error("duplicate table [" + name + "]");
          }
          if (root.table_arrays.count(name)) {
            error("'" + name + "' is already an array of tables");
          }
          current = &root.tables[name];
        }
        expect_line_end();
      } else {
        std::string key = read_key();
        skip_spaces();
        if (eof() || peek() != '=') {
          error("expected '=' after key '" + key + "'");
        }
        advance();
        Value v = read_value();
        if (current->values.count(key)) {
          error("duplicate key '" + key + "'");
        }
        current->values.emplace(std::move(key), std::move(v));
        expect_line_end();
      }
      skip_blank();
    }
    return root;
  }
};

}  // namespace

Table parse(const std::string& text, const std::string& source_name) {
  Reader r{text, source_name};
  return r.parse_document();
}

}  // namespace tsep::toml
