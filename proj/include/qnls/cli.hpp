#pragma once

#include "qnls/config.hpp"
#include "qnls/ground_state.hpp"

namespace qnls {

/// Exit codes of run_command.
inline constexpr int kExitOk = 0;
inline constexpr int kExitMismatch = 1;  // a numerical verdict did not hold
inline constexpr int kExitConfig = 2;    // bad arguments, config or paths

/// Entry point of the qnls executable: qnls <subcommand> [options].
int run_command(int argc, char** argv);

/// Ground state for the run's physics on the [ground_state] grid; the
/// candidate with the smallest action over the configured seed widths.
GroundState reference_ground_state(const RunConfig& cfg);

/// Initial data described by cfg.initial on the run grid. ref is required
/// for the kinds derived from a ground state.
FieldPair build_initial_data(const RunConfig& cfg, const Grid& grid, const GroundState* ref);

}  // namespace qnls
