#pragma once

#include <iosfwd>

#include "mimostat/runconfig.hpp"

namespace mimostat::cli {

// Subcommand bodies. Each writes its result (CSV or a scalar report) to `out`
// and returns a process exit code: 0 success, 2 config error, 3 numerical
// non-convergence.
int runMgf(const RunConfig& cfg, std::ostream& out);
int runErgodic(const RunConfig& cfg, std::ostream& out);
int runOutageCurve(const RunConfig& cfg, std::ostream& out);
int runDensity(const RunConfig& cfg, std::ostream& out);
int runSimulate(const RunConfig& cfg, std::ostream& out);
int runUstm(const RunConfig& cfg, std::ostream& out);
int runSweep(const RunConfig& cfg, std::ostream& out);

/// Dispatch by task name, including "validate"; opens cfg.outPath if set.
int runTask(const std::string& task, const RunConfig& cfg);

}  // namespace mimostat::cli
