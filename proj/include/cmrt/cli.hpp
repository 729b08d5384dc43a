#pragma once

namespace cmrt::cli {

/// CLI entry point (subcommands: coeffs, forward, reconstruct, convergence,
/// verify). Returns the process exit status: 0 on success, 1 on validation
/// or I/O failure, 2 on bad arguments.
int run(int argc, const char* const* argv);

}  // namespace cmrt::cli
