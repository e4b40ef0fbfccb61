#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace closure {

/// Typed entry of a sectioned configuration file.
struct ConfigValue {
  enum class Type { Number, Boolean, String, Array };
  Type type = Type::Number;
  double number = 0.0;
  bool boolean = false;
  std::string text;
  std::vector<ConfigValue> items;  // scalars only
  int line = 0;
};

using ConfigSection = std::map<std::string, ConfigValue>;
using Config = std::map<std::string, ConfigSection>;

/// Parses
///   # comment
///   [section]
///   key = 1.5 | true | "text" | [1, 2, "a"]
/// Keys before the first header land in section "". Duplicate sections or keys
/// and malformed lines raise Schema naming the line.
Config parse_config(std::string_view text);

}  // namespace closure
