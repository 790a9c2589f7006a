#pragma once

#include <string>

#include "gp/run_config.hpp"

namespace gp {

// Exit-code contract shared by all commands.
inline constexpr int kExitOk = 0;      // every solve certified
inline constexpr int kExitConfig = 1;  // invalid config or preconditions
inline constexpr int kExitCompute = 2; // bracket/box/integrator failure
inline constexpr int kExitVerify = 3;  // a verification claim failed

// Each command validates, computes fully in memory, then writes its
// output files into cfg.out_dir; nothing is written on validation
// failure. Identical configs produce byte-identical files.
int cmd_spectrum(const RunConfig& cfg);
int cmd_verify(const RunConfig& cfg);
int cmd_simulate(const RunConfig& cfg);
int cmd_sweep(const RunConfig& cfg);

// The verify report text, exposed so callers can compare runs byte for
// byte without re-reading files.
std::string render_verify_report(const RunConfig& cfg, int& exit_code);

} // namespace gp
