// nsfv: validate laws, run the coupled solver, verify orders, inspect snapshots.

#include <CLI11.hpp>

#include <iostream>

#include "nsfv/errors.hpp"
#include "nsfv/run.hpp"

namespace {

int guarded(auto&& body) {
    try {
        return body();
    } catch (const nsfv::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return nsfv::kExitConfig;
    } catch (const nsfv::ConvergenceFailure& e) {
        std::cerr << "convergence failure: " << e.what() << "\n";
        return nsfv::kExitSolver;
    } catch (const nsfv::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return nsfv::kExitSolver;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return nsfv::kExitConfig;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Periodic compressible Navier-Stokes-Fourier solver for virial pressure laws"};
    app.require_subcommand(1);

    std::string config_path, csv_path, dir, snapshot_path;
    bool csv_flag = false;

    auto* validate = app.add_subcommand("validate", "Audit the configured state law");
    validate->add_option("config", config_path, "Configuration file")->required()->check(CLI::ExistingFile);
    validate->add_option("--csv", csv_path, "Also write the report as CSV");

    auto* run = app.add_subcommand("run", "Solve to t_final and check the inequality suite");
    run->add_option("config", config_path, "Configuration file")->required()->check(CLI::ExistingFile);

    auto* mms = app.add_subcommand("mms", "Manufactured-solution refinement study");
    mms->add_option("config", config_path, "Configuration file")->required()->check(CLI::ExistingFile);

    auto* diagnose = app.add_subcommand("diagnose", "Recompute diagnostics from a snapshot directory");
    diagnose->add_option("dir", dir, "Run output directory")->required()->check(CLI::ExistingDirectory);

    auto* exp = app.add_subcommand("export", "Dump one snapshot");
    exp->add_option("snapshot", snapshot_path, "Snapshot file")->required()->check(CLI::ExistingFile);
    exp->add_flag("--csv", csv_flag, "Emit CSV (the only format)");

    CLI11_PARSE(app, argc, argv);

    if (*validate)
        return guarded([&] { return nsfv::validate_command(nsfv::load_config(config_path), std::cout, csv_path); });
    if (*run)
        return guarded([&] {
            const nsfv::RunResult r = nsfv::run_simulation(nsfv::load_config(config_path), true, &std::cout);
            if (r.exit_code != nsfv::kExitOk) std::cerr << r.message << "\n";
            return r.exit_code;
        });
    if (*mms) return guarded([&] { return nsfv::mms_command(nsfv::load_config(config_path), std::cout); });
    if (*diagnose) return guarded([&] { return nsfv::diagnose_command(dir, std::cout); });
    if (*exp)
        return guarded([&] {
            std::cout << nsfv::export_csv(snapshot_path);
            return nsfv::kExitOk;
        });
    return nsfv::kExitConfig;
}
