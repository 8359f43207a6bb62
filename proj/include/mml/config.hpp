#pragma once

// Run configuration: the parsed, validated form of a config file plus
// command-line overrides. Field semantics are shared by every subcommand;
// empty grid lists mean "use the command's default grid".

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mml/game.hpp"
#include "mml/linalg.hpp"
#include "mml/params.hpp"
#include "mml/sweep.hpp"

namespace mml {

enum class Command { Simulate, Compare, Threshold, Heatmap, EpsSweep, ErrorOrder, Igr,
                     Selftest };

const char* command_name(Command c);
Command parse_command(const std::string& name);

struct RunConfig {
  Command command = Command::Selftest;
  std::string game_id = "quad_cc";
  std::optional<QuadraticGame> inline_game;  // [quadratic] A/B/C; overrides game_id

  AdamParams params;
  long long steps = 2000;      // trajectory length for simulate/compare/igr
  long long max_steps = 20000; // per-cell cap for sweeps

  std::vector<double> beta_values;  // sweep/igr grids; empty = command default
  std::vector<double> h_values;
  std::vector<double> eps_values;
  std::vector<double> rho_values;   // igr grid only
  SweepMode mode = SweepMode::DiscreteSimulated;

  JointPoint init;  // empty = command default start
  std::filesystem::path output_dir = "out";
  std::uint64_t seed = 0;
  bool emit_svg = false;

  int random_init_count = 30;  // compare averaging; 0 disables
  double box_low = -1.0;
  double box_high = 1.0;
  int fine_substeps = 50;  // error-order flow integration
};

// Parses the TOML-subset text into a config without cross-field validation.
// Unknown keys or sections and type mismatches are errors.
RunConfig parse_config_text(const std::string& text);

RunConfig load_config_file(const std::filesystem::path& path);

// Cross-field validation: AdamParams bounds (errors name the field and its
// admissible interval), resolvable game, positive step counts, init
// dimensions, box orientation. Throws std::invalid_argument.
void validate_config(const RunConfig& config);

// The game a config designates: the inline quadratic when present, else the
// catalog entry (unknown ids list the valid ones).
ZeroSumGame config_game(const RunConfig& config);

// Emits a config file that parses back to an equal config.
std::string serialize_config(const RunConfig& config);

bool config_equal(const RunConfig& a, const RunConfig& b);

}  // namespace mml
