#include "closure/cli/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include "closure/error.hpp"

namespace closure {

namespace {

class LineParser {
 public:
  LineParser(std::string_view text, int line) : s_(text), line_(line) {}

  ConfigValue value(bool allow_array = true) {
    skip();
    if (pos_ >= s_.size()) fail("missing value");
    const char c = s_[pos_];
    if (c == '"') return string_value();
    if (c == '[') {
      if (!allow_array) fail("nested arrays are not supported");
      return array_value();
    }
    if (s_.substr(pos_, 4) == "true") {
      pos_ += 4;
      return boolean(true);
    }
    if (s_.substr(pos_, 5) == "false") {
      pos_ += 5;
      return boolean(false);
    }
    return number_value();
  }

  void finish() {
    skip();
    if (pos_ < s_.size() && s_[pos_] != '#') fail("unexpected text after value");
  }

 private:
  std::string_view s_;
  int line_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::Schema, "line " + std::to_string(line_) + ": " + what);
  }

  void skip() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\r')) ++pos_;
  }

  ConfigValue boolean(bool b) {
    ConfigValue v;
    v.type = ConfigValue::Type::Boolean;
    v.boolean = b;
    v.line = line_;
    return v;
  }

  ConfigValue string_value() {
    ConfigValue v;
    v.type = ConfigValue::Type::String;
    v.line = line_;
    ++pos_;
    while (pos_ < s_.size() && s_[pos_] != '"') {
      if (s_[pos_] == '\\') {
        if (++pos_ >= s_.size()) break;
        const char e = s_[pos_];
        if (e != '"' && e != '\\') fail("unsupported escape \\" + std::string(1, e));
      }
      v.text += s_[pos_++];
    }
    if (pos_ >= s_.size()) fail("unterminated string");
    ++pos_;
    return v;
  }

  ConfigValue array_value() {
    ConfigValue v;
    v.type = ConfigValue::Type::Array;
    v.line = line_;
    ++pos_;
    skip();
    if (pos_ < s_.size() && s_[pos_] == ']') {
      ++pos_;
      return v;
    }
    for (;;) {
      v.items.push_back(value(false));
      skip();
      if (pos_ >= s_.size()) fail("unterminated array");
      if (s_[pos_] == ']') {
        ++pos_;
        return v;
      }
      if (s_[pos_] != ',') fail("expected ',' or ']' in array");
      ++pos_;
    }
  }

  ConfigValue number_value() {
    ConfigValue v;
    v.line = line_;
    const char* begin = s_.data() + pos_;
    if (pos_ < s_.size() && s_[pos_] == '+') ++begin;  // from_chars rejects a leading '+'
    const auto res = std::from_chars(begin, s_.data() + s_.size(), v.number);
    if (res.ec != std::errc() || !std::isfinite(v.number)) fail("expected a number, boolean, string or array");
    pos_ = static_cast<std::size_t>(res.ptr - s_.data());
    return v;
  }
};

bool valid_name(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Config parse_config(std::string_view text) {
  Config cfg;
  std::string current;
  cfg[current];
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view raw = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto fail = [&](const std::string& what) {
      throw Error(ErrorKind::Schema, "line " + std::to_string(line_no) + ": " + what);
    };
    if (line.front() == '[') {
      const std::size_t close = line.find(']');
      if (close == std::string_view::npos) fail("unterminated section header");
      const std::string_view rest = trim(line.substr(close + 1));
      if (!rest.empty() && rest.front() != '#') fail("unexpected text after section header");
      const std::string name(trim(line.substr(1, close - 1)));
      if (!valid_name(name)) fail("invalid section name '" + name + "'");
      if (cfg.count(name)) fail("duplicate section [" + name + "]");
      current = name;
      cfg[current];
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) fail("expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    if (!valid_name(key)) fail("invalid key '" + key + "'");
    ConfigSection& section = cfg[current];
    if (section.count(key)) fail("duplicate key '" + key + "'");
    LineParser p(line.substr(eq + 1), line_no);
    ConfigValue v = p.value();
    p.finish();
    section.emplace(key, std::move(v));
    if (end == text.size()) break;
  }
  if (cfg[""].empty()) cfg.erase("");
  return cfg;
}

}  // namespace closure
