#pragma once

// Command execution: runs a validated RunConfig and writes the artifacts
// for its command (CSV tables, JSON summaries, optional SVG renderings)
// into the configured output directory. All file writes are atomic: a
// temporary file is renamed into place, so readers never observe partial
// output. Any failure leaves an error.json describing what went wrong and
// yields a nonzero exit status.

#include <iosfwd>

#include "mml/config.hpp"

namespace mml {

// Executes the command in `config`. Returns the process exit status:
// 0 on success, nonzero on failure (with error.json written best-effort).
int run(const RunConfig& config);

// Invariant battery behind the `selftest` command. Prints one line per
// check to `out` plus a final count line; returns the number of failures.
int selftest(std::ostream& out);

}  // namespace mml
