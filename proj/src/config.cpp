#include "mml/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mml/catalog.hpp"
#include "mml/toml.hpp"

namespace mml {

namespace {

[[noreturn]] void bad(const std::string& what) { throw std::invalid_argument(what); }

double expect_number(const TomlValue& v, const std::string& where) {
  if (v.kind != TomlValue::Kind::Number) bad(where + " must be a number");
  return v.number;
}

std::string expect_string(const TomlValue& v, const std::string& where) {
  if (v.kind != TomlValue::Kind::String) bad(where + " must be a string");
  return v.text;
}

bool expect_bool(const TomlValue& v, const std::string& where) {
  if (v.kind != TomlValue::Kind::Boolean) bad(where + " must be true or false");
  return v.boolean;
}

std::vector<double> expect_list(const TomlValue& v, const std::string& where) {
  if (v.kind == TomlValue::Kind::NumberList) return v.list;
  bad(where + " must be a numeric array");
}

Mat expect_matrix(const TomlValue& v, const std::string& where) {
  if (v.kind != TomlValue::Kind::Matrix) bad(where + " must be an array of numeric arrays");
  const std::size_t rows = v.matrix.size();
  if (rows == 0) bad(where + " must have at least one row");
  const std::size_t cols = v.matrix.front().size();
  for (const auto& row : v.matrix) {
    if (row.size() != cols) bad(where + " rows must all have the same length");
  }
  Mat m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = v.matrix[i][j];
  }
  return m;
}

long long expect_count(const TomlValue& v, const std::string& where, long long lo) {
  const double d = expect_number(v, where);
  if (!(d == std::floor(d)) || !std::isfinite(d)) bad(where + " must be an integer");
  const long long n = static_cast<long long>(d);
  if (n < lo) bad(where + " must be >= " + std::to_string(lo));
  return n;
}

std::uint64_t expect_seed(const TomlValue& v, const std::string& where) {
  const double d = expect_number(v, where);
  if (!(d >= 0.0) || d != std::floor(d) || d > 9007199254740992.0) {
    bad(where + " must be a nonnegative integer <= 2^53");
  }
  return static_cast<std::uint64_t>(d);
}

Vec to_vec(const std::vector<double>& v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

std::vector<double> from_vec(const Vec& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

std::vector<std::vector<double>> from_mat(const Mat& m) {
  std::vector<std::vector<double>> rows(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    rows[static_cast<std::size_t>(i)].assign(m.row(i).begin(), m.row(i).end());
  }
  return rows;
}

bool mats_equal(const Mat& a, const Mat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (a(i, j) != b(i, j)) return false;
    }
  }
  return true;
}

bool vecs_equal(const Vec& a, const Vec& b) {
  if (a.size() != b.size()) return false;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) != b(i)) return false;
  }
  return true;
}

void check_grid(const std::vector<double>& values, const std::string& name, double lo,
                double hi, bool open) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double v = values[i];
    const bool in_range = open ? (v > lo && v < hi) : (v >= lo && v <= hi);
    if (!in_range) {
      bad("RunConfig." + name + "[" + std::to_string(i) + "] = " + std::to_string(v) +
          " outside admissible interval (" + std::to_string(lo) + ", " + std::to_string(hi) +
          ")");
    }
    if (i > 0 && !(values[i] > values[i - 1])) {
      bad("RunConfig." + name + " must be strictly increasing");
    }
  }
}

}  // namespace

const char* command_name(Command c) {
  switch (c) {
    case Command::Simulate: return "simulate";
    case Command::Compare: return "compare";
    case Command::Threshold: return "threshold";
    case Command::Heatmap: return "heatmap";
    case Command::EpsSweep: return "eps-sweep";
    case Command::ErrorOrder: return "error-order";
    case Command::Igr: return "igr";
    case Command::Selftest: return "selftest";
  }
  return "?";
}

Command parse_command(const std::string& name) {
  for (Command c : {Command::Simulate, Command::Compare, Command::Threshold, Command::Heatmap,
                    Command::EpsSweep, Command::ErrorOrder, Command::Igr, Command::Selftest}) {
    if (name == command_name(c)) return c;
  }
  bad("unknown command '" + name +
      "'; valid: simulate, compare, threshold, heatmap, eps-sweep, error-order, igr, "
      "selftest");
}

RunConfig parse_config_text(const std::string& text) {
  const TomlTable table = parse_toml(text);
  RunConfig config;
  for (const auto& [section, entries] : table) {
    for (const auto& [key, value] : entries) {
      const std::string where =
          section.empty() ? "config key '" + key + "'" : "config key '" + section + "." + key + "'";
      if (section.empty()) {
        if (key == "command") {
          config.command = parse_command(expect_string(value, where));
        } else if (key == "game") {
          config.game_id = expect_string(value, where);
        } else if (key == "output_dir") {
          config.output_dir = expect_string(value, where);
        } else if (key == "seed") {
          config.seed = expect_seed(value, where);
        } else if (key == "emit_svg") {
          config.emit_svg = expect_bool(value, where);
        } else if (key == "steps") {
          config.steps = expect_count(value, where, 1);
        } else if (key == "max_steps") {
          config.max_steps = expect_count(value, where, 1);
        } else if (key == "mode") {
          config.mode = parse_sweep_mode(expect_string(value, where));
        } else if (key == "random_init_count") {
          config.random_init_count = static_cast<int>(expect_count(value, where, 0));
        } else if (key == "box_low") {
          config.box_low = expect_number(value, where);
        } else if (key == "box_high") {
          config.box_high = expect_number(value, where);
        } else if (key == "fine_substeps") {
          config.fine_substeps = static_cast<int>(expect_count(value, where, 1));
        } else {
          bad("unknown " + where);
        }
      } else if (section == "params") {
        if (key == "h") {
          config.params.h = expect_number(value, where);
        } else if (key == "beta") {
          config.params.beta = expect_number(value, where);
        } else if (key == "rho") {
          config.params.rho = expect_number(value, where);
        } else if (key == "eps") {
          config.params.eps = expect_number(value, where);
        } else {
          bad("unknown " + where);
        }
      } else if (section == "grid") {
        if (key == "beta_values") {
          config.beta_values = expect_list(value, where);
        } else if (key == "h_values") {
          config.h_values = expect_list(value, where);
        } else if (key == "eps_values") {
          config.eps_values = expect_list(value, where);
        } else if (key == "rho_values") {
          config.rho_values = expect_list(value, where);
        } else {
          bad("unknown " + where);
        }
      } else if (section == "init") {
        if (key == "x") {
          config.init.x = to_vec(expect_list(value, where));
        } else if (key == "y") {
          config.init.y = to_vec(expect_list(value, where));
        } else {
          bad("unknown " + where);
        }
      } else if (section == "quadratic") {
        if (!config.inline_game) config.inline_game = QuadraticGame{};
        if (key == "A") {
          config.inline_game->A = expect_matrix(value, where);
        } else if (key == "B") {
          config.inline_game->B = expect_matrix(value, where);
        } else if (key == "C") {
          config.inline_game->C = expect_matrix(value, where);
        } else {
          bad("unknown " + where);
        }
      } else {
        bad("unknown config section '" + section + "'");
      }
    }
  }
  return config;
}

RunConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void validate_config(const RunConfig& config) {
  validate(config.params);
  (void)config_game(config);  // forces game resolution errors here
  if (config.steps < 1) bad("RunConfig.steps must be >= 1");
  if (config.max_steps < 1) bad("RunConfig.max_steps must be >= 1");
  if (config.random_init_count < 0) bad("RunConfig.random_init_count must be >= 0");
  if (!(config.box_low <= config.box_high)) {
    bad("RunConfig.box_low must be <= box_high (degenerate box)");
  }
  if (config.command == Command::ErrorOrder && config.fine_substeps < 50) {
    bad("RunConfig.fine_substeps must be >= 50 for error-order");
  }
  check_grid(config.beta_values, "beta_values", -1.0, 1.0, true);
  check_grid(config.rho_values, "rho_values", 0.0, 1.0, true);
  check_grid(config.h_values, "h_values", 0.0, std::numeric_limits<double>::infinity(), true);
  check_grid(config.eps_values, "eps_values", 0.0, std::numeric_limits<double>::infinity(),
             true);
  if (config.init.d1() + config.init.d2() > 0) {
    const ZeroSumGame game = config_game(config);
    if (config.init.d1() != game.d1 || config.init.d2() != game.d2) {
      bad("RunConfig.init dimensions (" + std::to_string(config.init.d1()) + ", " +
          std::to_string(config.init.d2()) + ") do not match game (" +
          std::to_string(game.d1) + ", " + std::to_string(game.d2) + ")");
    }
  }
}

ZeroSumGame config_game(const RunConfig& config) {
  if (config.inline_game) return make_quadratic_game(*config.inline_game, "quadratic");
  return catalog(config.game_id);
}

std::string serialize_config(const RunConfig& config) {
  TomlTable table;
  auto& root = table[""];
  root["command"] = TomlValue::of_string(command_name(config.command));
  root["game"] = TomlValue::of_string(config.game_id);
  root["output_dir"] = TomlValue::of_string(config.output_dir.string());
  root["seed"] = TomlValue::of_number(static_cast<double>(config.seed));
  root["emit_svg"] = TomlValue::of_bool(config.emit_svg);
  root["steps"] = TomlValue::of_number(static_cast<double>(config.steps));
  root["max_steps"] = TomlValue::of_number(static_cast<double>(config.max_steps));
  root["mode"] = TomlValue::of_string(sweep_mode_name(config.mode));
  root["random_init_count"] =
      TomlValue::of_number(static_cast<double>(config.random_init_count));
  root["box_low"] = TomlValue::of_number(config.box_low);
  root["box_high"] = TomlValue::of_number(config.box_high);
  root["fine_substeps"] = TomlValue::of_number(static_cast<double>(config.fine_substeps));

  auto& params = table["params"];
  params["h"] = TomlValue::of_number(config.params.h);
  params["beta"] = TomlValue::of_number(config.params.beta);
  params["rho"] = TomlValue::of_number(config.params.rho);
  params["eps"] = TomlValue::of_number(config.params.eps);

  if (!config.beta_values.empty() || !config.h_values.empty() ||
      !config.eps_values.empty() || !config.rho_values.empty()) {
    auto& grid = table["grid"];
    if (!config.beta_values.empty()) grid["beta_values"] = TomlValue::of_list(config.beta_values);
    if (!config.h_values.empty()) grid["h_values"] = TomlValue::of_list(config.h_values);
    if (!config.eps_values.empty()) grid["eps_values"] = TomlValue::of_list(config.eps_values);
    if (!config.rho_values.empty()) grid["rho_values"] = TomlValue::of_list(config.rho_values);
  }

  if (config.init.d1() + config.init.d2() > 0) {
    auto& init = table["init"];
    init["x"] = TomlValue::of_list(from_vec(config.init.x));
    init["y"] = TomlValue::of_list(from_vec(config.init.y));
  }

  if (config.inline_game) {
    auto& quad = table["quadratic"];
    quad["A"] = TomlValue::of_matrix(from_mat(config.inline_game->A));
    quad["B"] = TomlValue::of_matrix(from_mat(config.inline_game->B));
    quad["C"] = TomlValue::of_matrix(from_mat(config.inline_game->C));
  }
  return serialize_toml(table);
}

bool config_equal(const RunConfig& a, const RunConfig& b) {
  if (a.command != b.command || a.game_id != b.game_id || a.steps != b.steps ||
      a.max_steps != b.max_steps || a.mode != b.mode || a.output_dir != b.output_dir ||
      a.seed != b.seed || a.emit_svg != b.emit_svg ||
      a.random_init_count != b.random_init_count || a.box_low != b.box_low ||
      a.box_high != b.box_high || a.fine_substeps != b.fine_substeps) {
    return false;
  }
  if (a.params.h != b.params.h || a.params.beta != b.params.beta ||
      a.params.rho != b.params.rho || a.params.eps != b.params.eps) {
    return false;
  }
  if (a.beta_values != b.beta_values || a.h_values != b.h_values ||
      a.eps_values != b.eps_values || a.rho_values != b.rho_values) {
    return false;
  }
  if (!vecs_equal(a.init.x, b.init.x) || !vecs_equal(a.init.y, b.init.y)) return false;
  if (a.inline_game.has_value() != b.inline_game.has_value()) return false;
  if (a.inline_game) {
    if (!mats_equal(a.inline_game->A, b.inline_game->A) ||
        !mats_equal(a.inline_game->B, b.inline_game->B) ||
        !mats_equal(a.inline_game->C, b.inline_game->C)) {
      return false;
    }
  }
  return true;
}

}  // namespace mml
