#include "mml/toml.hpp"

#include <cctype>
#include <cstdlib>
#include <stdexcept>

#include "mml/csv.hpp"

namespace mml {

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
  throw std::runtime_error("config line " + std::to_string(line) + ": " + what);
}

bool bare_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) return false;
  }
  return true;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

// Removes a trailing comment, honoring quotes so '#' inside strings stays.
std::string strip_comment(const std::string& s) {
  bool in_string = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const char c = s[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
    } else if (c == '"') {
      in_string = true;
    } else if (c == '#') {
      return s.substr(0, i);
    }
  }
  return s;
}

struct Cursor {
  const std::string& s;
  std::size_t pos = 0;
  int line;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  void expect(char c) {
    if (peek() != c) fail(line, std::string("expected '") + c + "'");
    ++pos;
  }
};

double parse_number_at(Cursor& cur) {
  cur.skip_ws();
  const char* begin = cur.s.c_str() + cur.pos;
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin) fail(cur.line, "expected a number");
  cur.pos += static_cast<std::size_t>(end - begin);
  return v;
}

std::vector<double> parse_number_list_at(Cursor& cur) {
  cur.expect('[');
  std::vector<double> out;
  if (cur.peek() == ']') {
    ++cur.pos;
    return out;
  }
  for (;;) {
    out.push_back(parse_number_at(cur));
    const char c = cur.peek();
    if (c == ',') {
      ++cur.pos;
      continue;
    }
    if (c == ']') {
      ++cur.pos;
      return out;
    }
    fail(cur.line, "expected ',' or ']' in array");
  }
}

TomlValue parse_array(Cursor& cur) {
  cur.expect('[');
  if (cur.peek() == '[') {
    std::vector<std::vector<double>> rows;
    for (;;) {
      rows.push_back(parse_number_list_at(cur));
      const char c = cur.peek();
      if (c == ',') {
        ++cur.pos;
        continue;
      }
      if (c == ']') {
        ++cur.pos;
        return TomlValue::of_matrix(std::move(rows));
      }
      fail(cur.line, "expected ',' or ']' in array of arrays");
    }
  }
  // Rewind onto the '[' and reuse the flat-list scanner.
  --cur.pos;
  return TomlValue::of_list(parse_number_list_at(cur));
}

std::string parse_string_at(Cursor& cur) {
  cur.expect('"');
  std::string out;
  while (cur.pos < cur.s.size()) {
    const char c = cur.s[cur.pos++];
    if (c == '"') return out;
    if (c == '\\') {
      if (cur.pos >= cur.s.size()) fail(cur.line, "dangling escape in string");
      const char e = cur.s[cur.pos++];
      switch (e) {
        case '"': out += '"'; break;
        case '\\': out += '\\'; break;
        case 'n': out += '\n'; break;
        case 't': out += '\t'; break;
        default: fail(cur.line, std::string("unsupported escape '\\") + e + "'");
      }
    } else {
      out += c;
    }
  }
  fail(cur.line, "unterminated string");
}

TomlValue parse_value(const std::string& text, int line) {
  Cursor cur{text, 0, line};
  TomlValue v;
  const char c = cur.peek();
  if (c == '"') {
    v = TomlValue::of_string(parse_string_at(cur));
  } else if (c == '[') {
    v = parse_array(cur);
  } else if (text.compare(cur.pos, 4, "true") == 0) {
    cur.pos += 4;
    v = TomlValue::of_bool(true);
  } else if (text.compare(cur.pos, 5, "false") == 0) {
    cur.pos += 5;
    v = TomlValue::of_bool(false);
  } else {
    v = TomlValue::of_number(parse_number_at(cur));
  }
  if (!cur.done()) fail(line, "trailing characters after value");
  return v;
}

void escape_into(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += '"';
}

void list_into(std::string& out, const std::vector<double>& v) {
  out += '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += format_double(v[i]);
  }
  out += ']';
}

}  // namespace

TomlValue TomlValue::of_bool(bool b) {
  TomlValue v;
  v.kind = Kind::Boolean;
  v.boolean = b;
  return v;
}

TomlValue TomlValue::of_number(double n) {
  TomlValue v;
  v.kind = Kind::Number;
  v.number = n;
  return v;
}

TomlValue TomlValue::of_string(std::string s) {
  TomlValue v;
  v.kind = Kind::String;
  v.text = std::move(s);
  return v;
}

TomlValue TomlValue::of_list(std::vector<double> l) {
  TomlValue v;
  v.kind = Kind::NumberList;
  v.list = std::move(l);
  return v;
}

TomlValue TomlValue::of_matrix(std::vector<std::vector<double>> m) {
  TomlValue v;
  v.kind = Kind::Matrix;
  v.matrix = std::move(m);
  return v;
}

TomlTable parse_toml(const std::string& text) {
  TomlTable table;
  std::string section;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t nl = text.find('\n', start);
    const std::string raw =
        text.substr(start, nl == std::string::npos ? std::string::npos : nl - start);
    start = nl == std::string::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    const std::string stripped = trim(strip_comment(raw));
    if (stripped.empty()) continue;

    if (stripped.front() == '[' && stripped.back() == ']' &&
        stripped.find('=') == std::string::npos) {
      const std::string name = trim(stripped.substr(1, stripped.size() - 2));
      if (!bare_name(name)) fail(line_no, "malformed section header");
      section = name;
      table[section];  // a header alone creates the (possibly empty) section
      continue;
    }

    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos) fail(line_no, "expected 'key = value' or '[section]'");
    const std::string key = trim(stripped.substr(0, eq));
    if (!bare_name(key)) fail(line_no, "malformed key '" + key + "'");
    if (table[section].count(key)) {
      fail(line_no, "duplicate key '" + key + "' in section '" + section + "'");
    }
    table[section][key] = parse_value(trim(stripped.substr(eq + 1)), line_no);
  }
  return table;
}

std::string serialize_toml(const TomlTable& table) {
  std::string out;
  for (const auto& [section, entries] : table) {
    if (!section.empty()) {
      if (!out.empty()) out += '\n';
      out += '[' + section + "]\n";
    }
    for (const auto& [key, value] : entries) {
      out += key;
      out += " = ";
      switch (value.kind) {
        case TomlValue::Kind::Boolean: out += value.boolean ? "true" : "false"; break;
        case TomlValue::Kind::Number: out += format_double(value.number); break;
        case TomlValue::Kind::String: escape_into(out, value.text); break;
        case TomlValue::Kind::NumberList: list_into(out, value.list); break;
        case TomlValue::Kind::Matrix: {
          out += '[';
          for (std::size_t i = 0; i < value.matrix.size(); ++i) {
            if (i) out += ", ";
            list_into(out, value.matrix[i]);
          }
          out += ']';
          break;
        }
      }
      out += '\n';
    }
  }
  return out;
}

}  // namespace mml
