#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "mml/config.hpp"
#include "mml/run.hpp"
#include "mml/sweep.hpp"

// Command-line front end. A run is configured by an optional TOML file plus
// flag overrides (flags win), with the subcommand choosing what to compute;
// a bare invocation with a --config file takes the command from the file,
// and with nothing at all runs the selftest battery.
int main(int argc, char** argv) {
  CLI::App app{"desk-scale laboratory for adaptive descent-ascent dynamics"};
  // --h is the step-size flag, so help is long-form only.
  app.set_help_flag("--help", "print usage and exit");
  app.require_subcommand(0, 1);

  std::string config_path;
  std::optional<std::string> out_dir, game_id, mode;
  std::optional<double> h, beta, rho, eps;
  std::optional<long long> steps, max_steps;
  std::optional<std::uint64_t> seed;
  bool svg = false;

  app.add_option("--config", config_path, "TOML run configuration file");
  app.add_option("--out", out_dir, "output directory (default: out)");
  app.add_option("--seed", seed, "PRNG seed for random starts");
  app.add_flag("--svg", svg, "also render an SVG for grid commands");
  app.add_option("--h", h, "step size, > 0");
  app.add_option("--beta", beta, "first-moment factor, in (-1, 1)");
  app.add_option("--rho", rho, "second-moment factor, in (0, 1)");
  app.add_option("--eps", eps, "stabilizer added inside the square root, > 0");
  app.add_option("--steps", steps, "steps to record for trajectory commands");
  app.add_option("--max-steps", max_steps, "per-cell step cap for grid commands");
  app.add_option("--game", game_id, "catalog game id (see README)");
  app.add_option("--mode", mode, "how grid cells are judged (sweep mode name)");

  const std::vector<std::pair<std::string, mml::Command>> commands = {
      {"simulate", mml::Command::Simulate},
      {"compare", mml::Command::Compare},
      {"threshold", mml::Command::Threshold},
      {"heatmap", mml::Command::Heatmap},
      {"eps-sweep", mml::Command::EpsSweep},
      {"error-order", mml::Command::ErrorOrder},
      {"igr", mml::Command::Igr},
      {"selftest", mml::Command::Selftest},
  };
  const std::vector<std::string> descriptions = {
      "run the descent-ascent recursion, write the trajectory",
      "recursion vs adaptive flow vs sign flow from one start",
      "spectral step-size thresholds at a point",
      "(beta, h) convergence grid",
      "(eps, h) convergence grid at fixed beta",
      "local-error order of both continuous models",
      "implicit-regularization diagnostics over (beta, rho)",
      "run the built-in invariant battery",
  };
  for (std::size_t i = 0; i < commands.size(); ++i)
    app.add_subcommand(commands[i].first, descriptions[i])->fallthrough();

  CLI11_PARSE(app, argc, argv);

  mml::RunConfig config;
  try {
    if (!config_path.empty()) config = mml::load_config_file(config_path);
    for (const auto& [name, command] : commands)
      if (app.got_subcommand(name)) config.command = command;
    if (out_dir) config.output_dir = *out_dir;
    if (seed) config.seed = *seed;
    if (svg) config.emit_svg = true;
    if (h) config.params.h = *h;
    if (beta) config.params.beta = *beta;
    if (rho) config.params.rho = *rho;
    if (eps) config.params.eps = *eps;
    if (steps) config.steps = *steps;
    if (max_steps) config.max_steps = *max_steps;
    if (game_id) {
      config.game_id = *game_id;
      config.inline_game.reset();  // an explicit id overrides a file's [quadratic]
    }
    if (mode) config.mode = mml::parse_sweep_mode(*mode);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return mml::run(config);
}
