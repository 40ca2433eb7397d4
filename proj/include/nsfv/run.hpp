#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "nsfv/config.hpp"
#include "nsfv/coupler.hpp"
#include "nsfv/diagnostics.hpp"
#include "nsfv/io.hpp"
#include "nsfv/law_validator.hpp"

namespace nsfv {

/// Process exit statuses of the command-line front end.
enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitSolver = 2, kExitInequality = 3 };

/// Initial (ρ, m) at t = 0 and the matching good unknown g₀.
std::pair<HydroState, ScalarField> initial_state(const RunConfig& cfg);

struct RunResult {
    int exit_code = kExitOk;
    std::string message;
    ValidationReport validation;
    RunReport report;
    SlabTrajectory trajectory;
    DiagnosticSeries series;
    InequalityVerdict verdict;
    /// (ε, ‖θ_ε(T) − θ_prev(T)‖₂) for each continuation run after the first.
    std::vector<std::pair<double, double>> continuation;
};

/// Solves from the configured initial data to t_final and evaluates the
/// inequality suite. When `write_artifacts` is set, the output directory
/// receives config.ini, diagnostics.csv, report.txt, run.log and snapshots.
/// Never throws for solver or configuration failures; they map to exit codes.
RunResult run_simulation(const RunConfig& cfg, bool write_artifacts = true, std::ostream* log = nullptr);

/// Validator report for the configured law. Exit status 1 when any check fails.
int validate_command(const RunConfig& cfg, std::ostream& out, const std::string& csv_path = {});

/// Refinement tables for the configured module, echoed and written to the output directory.
int mms_command(const RunConfig& cfg, std::ostream& out);

/// Recomputes the diagnostic series from the snapshots in `dir` (law taken from
/// `dir`/config.ini) and writes `dir`/diagnostics_from_snapshots.csv.
int diagnose_command(const std::string& dir, std::ostream& out);

/// Per-cell CSV of one snapshot.
std::string export_csv(const std::string& snapshot_path);

}  // namespace nsfv
