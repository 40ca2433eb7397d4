#pragma once

#include <string>
#include <vector>

#include "nsfv/coupler.hpp"
#include "nsfv/diagnostics.hpp"
#include "nsfv/law_validator.hpp"
#include "nsfv/statelaw.hpp"

namespace nsfv {

/// Profile selector for one initial field: f(x) = mean + amplitude·sin(2π·mode·x)
/// (sine) or the mean alone (uniform). `file` takes the field from a snapshot.
struct ProfileSpec {
    std::string kind = "uniform";
    double mean = 0.0;
    double amplitude = 0.0;
};

struct InitialConfig {
    ProfileSpec rho{"uniform", 1.0, 0.0};
    ProfileSpec theta{"uniform", 1.0, 0.0};
    ProfileSpec u{"uniform", 0.0, 0.0};
    int mode = 1;
    /// Snapshot read when any profile is "file" (relative paths resolve against the config file).
    std::string file;
};

struct MmsConfig {
    std::string module = "thermal";
    std::vector<int> resolutions{32, 64, 128};
    /// Step counts for the thermal temporal study (empty disables it).
    std::vector<int> steps{10, 20, 40};
    int time_n = 64;
    double t_final = 0.05;
    double amplitude = 0.5;
};

struct RunConfig {
    VirialLaw law = laws::reference();

    int dim = 1;
    int n = 64;
    double length = 1.0;

    double t_final = 0.05;
    double slab_length = 0.05;
    double cfl = 0.4;
    int thermal_steps_per_slab = 20;

    FixedPointConfig fixed_point;

    double eps = 1e-3;
    std::vector<double> continuation;

    InitialConfig initial;

    std::string out_dir = "out";
    /// Write a snapshot every k trajectory samples (0: final state only).
    int snapshot_every = 0;
    bool csv = true;

    ScanGrid scan;
    ValidatorOptions validator;
    /// Run even when the law fails validator checks.
    bool force = false;

    double c_tol = kDefaultCTol;

    MmsConfig mms;

    /// Directory of the config file; used to resolve relative paths.
    std::string base_dir = ".";

    [[nodiscard]] PeriodicGrid grid() const { return PeriodicGrid(dim, n, length); }
    [[nodiscard]] FixedPointConfig fixed_point_config() const;
};

/// Strict INI parser. Unknown sections or keys, malformed values and violated
/// field invariants raise ConfigError carrying the line number.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Runs the law validator on the configured law and grid dimension. Throws
/// ConfigError naming every failing check unless `force` is set.
ValidationReport check_admissible(const RunConfig& cfg);

/// Canonical text form; parse_config(to_text(cfg)) reproduces cfg.
std::string to_text(const RunConfig& cfg);

}  // namespace nsfv
