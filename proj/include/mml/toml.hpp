#pragma once

// Minimal TOML-subset reader/writer for run configs: top-level and [section]
// scoped key = value pairs with numbers, booleans, quoted strings, flat
// numeric arrays, and numeric array-of-arrays (single line each). '#' starts
// a comment. Not a general TOML implementation; the subset exists so configs
// round-trip exactly through serialize_toml.

#include <map>
#include <string>
#include <vector>

namespace mml {

struct TomlValue {
  enum class Kind { Boolean, Number, String, NumberList, Matrix };
  Kind kind = Kind::Number;
  bool boolean = false;
  double number = 0.0;
  std::string text;
  std::vector<double> list;
  std::vector<std::vector<double>> matrix;

  static TomlValue of_bool(bool b);
  static TomlValue of_number(double v);
  static TomlValue of_string(std::string s);
  static TomlValue of_list(std::vector<double> v);
  static TomlValue of_matrix(std::vector<std::vector<double>> m);

  bool operator==(const TomlValue&) const = default;
};

// section name -> key -> value; "" holds keys above the first section
// header. Duplicate keys within a section are rejected.
using TomlTable = std::map<std::string, std::map<std::string, TomlValue>>;

// Throws std::runtime_error naming the offending line on malformed input.
TomlTable parse_toml(const std::string& text);

// Inverse of parse_toml on its own output: parse_toml(serialize_toml(t)) == t.
std::string serialize_toml(const TomlTable& table);

}  // namespace mml
