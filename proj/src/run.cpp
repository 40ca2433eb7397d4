#include "nsfv/run.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "nsfv/errors.hpp"
#include "nsfv/mms.hpp"
#include "nsfv/thermal.hpp"

namespace nsfv {

namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IOError("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw IOError("failed writing " + path.string());
}

// Sine profiles use sin(2πkx) in 1D and sin(2πkx)·sin(2πky) in 2D.
double shape(const PeriodicGrid& g, std::size_t c, int mode) {
    const double w = 2.0 * std::numbers::pi * mode / g.length;
    double s = std::sin(w * g.center(c, 0));
    if (g.dim == 2) s *= std::sin(w * g.center(c, 1));
    return s;
}

ScalarField profile(const PeriodicGrid& g, const ProfileSpec& p, int mode) {
    ScalarField f(g, p.mean);
    if (p.kind == "sine")
        for (std::size_t c = 0; c < f.size(); ++c) f[c] += p.amplitude * shape(g, c, mode);
    return f;
}

std::string verdict_text(const InequalityVerdict& v, const InequalityTolerance& tol) {
    std::ostringstream os;
    os << "tolerance: c_tol=" << format_double(tol.c_tol) << " dt=" << format_double(tol.dt)
       << " h=" << format_double(tol.h) << "\n";
    os << "energy inequality: " << (v.energy_pass ? "PASS" : "FAIL")
       << " (worst excess over tolerance " << format_double(v.worst_energy_excess) << ")\n";
    os << "entropy inequality: " << (v.entropy_pass ? "PASS" : "FAIL")
       << " (smallest slack " << format_double(v.worst_entropy_deficit) << ")\n";
    os << "g balance: " << (v.g_balance_pass ? "PASS" : "FAIL") << " (relative "
       << format_double(v.g_balance_relative) << ")\n";
    return os.str();
}

SlabTrajectory solve(const RunConfig& cfg, double eps, RunReport* report) {
    auto [hydro, g0] = initial_state(cfg);
    if (eps != cfg.eps) {
        const ScalarField theta0 = theta_field(g0, hydro.rho, cfg.law, cfg.eps);
        g0 = initial_g(hydro.rho, theta0, cfg.law, eps);
    }
    HydroParams hp;
    hp.cfl = cfg.cfl;
    return continue_slabs(hydro, g0, cfg.law, cfg.fixed_point_config(), eps, cfg.t_final, report, hp);
}

}  // namespace

std::pair<HydroState, ScalarField> initial_state(const RunConfig& cfg) {
    const PeriodicGrid grid = cfg.grid();
    const InitialConfig& ic = cfg.initial;
    Snapshot file;
    const bool any_file = ic.rho.kind == "file" || ic.theta.kind == "file" || ic.u.kind == "file";
    if (any_file) {
        fs::path p(ic.file);
        if (p.is_relative()) p = fs::path(cfg.base_dir) / p;
        file = read_snapshot(p.string(), cfg.length);
        if (!(file.grid == grid)) throw ConfigError("initial snapshot grid does not match [grid]");
    }

    HydroState h{ic.rho.kind == "file" ? file.field(FieldTag::rho) : profile(grid, ic.rho, ic.mode),
                 VectorField(grid, 0.0), 0.0};
    if (h.rho.min() <= 0.0) throw ConfigError("initial density must be positive");

    if (ic.u.kind == "file") {
        h.m[0] = file.field(FieldTag::m_x);
        if (grid.dim == 2) h.m[1] = file.field(FieldTag::m_y);
    } else {
        const ScalarField ux = profile(grid, ic.u, ic.mode);
        for (std::size_t c = 0; c < grid.size(); ++c) h.m[0][c] = h.rho[c] * ux[c];
    }

    ScalarField g0;
    if (ic.theta.kind == "file") {
        if (file.has(FieldTag::g) && file.eps == cfg.eps && ic.rho.kind == "file") {
            g0 = file.field(FieldTag::g);
        } else {
            g0 = initial_g(h.rho, file.field(FieldTag::theta), cfg.law, cfg.eps);
        }
    } else {
        const ScalarField theta0 = profile(grid, ic.theta, ic.mode);
        if (theta0.min() < 0.0) throw ConfigError("initial temperature must be non-negative");
        g0 = initial_g(h.rho, theta0, cfg.law, cfg.eps);
    }
    return {std::move(h), std::move(g0)};
}

RunResult run_simulation(const RunConfig& cfg, bool write_artifacts, std::ostream* log) {
    RunResult res;
    std::ostringstream logbuf;
    auto note = [&](const std::string& line) {
        logbuf << line << "\n";
        if (log) *log << line << "\n";
    };
    const fs::path dir(cfg.out_dir);
    auto flush_log = [&] {
        if (write_artifacts) write_text(dir / "run.log", logbuf.str());
    };

    try {
        if (write_artifacts) {
            fs::create_directories(dir);
            write_text(dir / "config.ini", to_text(cfg));
        }
        res.validation = check_admissible(cfg);
        if (!res.validation.all_pass()) {
            std::string ids;
            for (const auto& id : res.validation.failures()) ids += " " + id;
            note("validator failures ignored (force = true):" + ids);
        }
        res.trajectory = solve(cfg, cfg.eps, &res.report);
        note("fixed point converged on " + std::to_string(res.report.slabs.size()) + " slab(s)");
    } catch (const ConvergenceFailure& e) {
        res.exit_code = kExitSolver;
        res.message = e.what();
        note(std::string("convergence failure: ") + e.what());
        if (write_artifacts) write_text(dir / "report.txt", res.report.to_text());
        flush_log();
        return res;
    } catch (const ConfigError& e) {
        res.exit_code = kExitConfig;
        res.message = e.what();
        note(std::string("configuration error: ") + e.what());
        flush_log();
        return res;
    } catch (const Error& e) {
        res.exit_code = kExitSolver;
        res.message = e.what();
        res.report.status = std::string("solver error: ") + e.what();
        note(std::string("solver error: ") + e.what());
        if (write_artifacts) write_text(dir / "report.txt", res.report.to_text());
        flush_log();
        return res;
    }

    res.series = compute_series(res.trajectory, cfg.law);
    const InequalityTolerance tol{cfg.c_tol, cfg.slab_length / cfg.thermal_steps_per_slab, cfg.grid().h()};
    res.verdict = check_inequalities(res.trajectory, res.series, cfg.law, tol);
    const std::string vtext = verdict_text(res.verdict, tol);
    note(vtext.substr(0, vtext.size() - 1));

    // ε-continuation: rerun for each listed ε and record successive θ(T) distances.
    if (!cfg.continuation.empty()) {
        ScalarField prev;
        for (double eps : cfg.continuation) {
            try {
                RunReport rep;
                const SlabTrajectory t = solve(cfg, eps, &rep);
                if (prev.size() > 0) {
                    ScalarField d = t.theta.back();
                    d.axpy(-1.0, prev);
                    res.continuation.emplace_back(eps, lp_norm(d, 2.0));
                }
                prev = t.theta.back();
            } catch (const Error& e) {
                note("continuation at eps=" + format_double(eps) + " failed: " + e.what());
                res.exit_code = kExitSolver;
                res.message = e.what();
            }
        }
    }

    if (write_artifacts) {
        if (cfg.csv) write_text(dir / "diagnostics.csv", series_csv(res.series));
        std::string report = res.report.to_text() + vtext;
        if (!res.continuation.empty()) {
            std::string ctext = "eps,distance\n";
            for (const auto& [e, d] : res.continuation) ctext += format_double(e) + "," + format_double(d) + "\n";
            write_text(dir / "continuation.csv", ctext);
        }
        write_text(dir / "report.txt", report);
        write_text(dir / "validation.csv", res.validation.to_csv());
        const std::size_t last = res.trajectory.samples() - 1;
        int index = 0;
        for (std::size_t k = 0; k <= last; ++k) {
            const bool due = k == last || (cfg.snapshot_every > 0 && k % static_cast<std::size_t>(cfg.snapshot_every) == 0);
            if (!due) continue;
            char name[32];
            std::snprintf(name, sizeof name, "snap_%05d.nsfv", index++);
            write_snapshot((dir / name).string(), snapshot_of(res.trajectory, k));
        }
    }

    if (res.exit_code == kExitOk && !res.verdict.all_pass()) {
        res.exit_code = kExitInequality;
        res.message = "inequality check failed";
    }
    flush_log();
    return res;
}

int validate_command(const RunConfig& cfg, std::ostream& out, const std::string& csv_path) {
    const ValidationReport rep = validate_law(cfg.law, cfg.dim, cfg.scan, cfg.validator);
    out << rep.to_text();
    if (!csv_path.empty()) write_text(csv_path, rep.to_csv());
    return rep.all_pass() ? kExitOk : kExitConfig;
}

int mms_command(const RunConfig& cfg, std::ostream& out) {
    const MmsConfig& m = cfg.mms;
    const fs::path dir(cfg.out_dir);
    fs::create_directories(dir);
    if (m.module == "thermal") {
        const std::string space = mms_csv(thermal_mms_space(cfg.law, m.resolutions, m.t_final, cfg.eps, m.amplitude));
        out << "# thermal, spatial\n" << space;
        write_text(dir / "mms_thermal_space.csv", space);
        if (!m.steps.empty()) {
            const std::string time = mms_csv(thermal_mms_time(cfg.law, m.time_n, m.steps, m.t_final, cfg.eps, m.amplitude));
            out << "# thermal, temporal\n" << time;
            write_text(dir / "mms_thermal_time.csv", time);
        }
    } else {
        const std::string table = mms_csv(hydro_mms(cfg.law, m.resolutions, m.t_final, m.amplitude));
        out << "# hydro\n" << table;
        write_text(dir / "mms_hydro.csv", table);
    }
    return kExitOk;
}

int diagnose_command(const std::string& dir, std::ostream& out) {
    const RunConfig cfg = load_config((fs::path(dir) / "config.ini").string());
    std::vector<std::string> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".nsfv") files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
    std::vector<Snapshot> snaps;
    for (const auto& f : files) snaps.push_back(read_snapshot(f, cfg.length));
    std::sort(snaps.begin(), snaps.end(), [](const Snapshot& a, const Snapshot& b) { return a.time < b.time; });
    const SlabTrajectory traj = trajectory_from_snapshots(snaps, cfg.law);
    const DiagnosticSeries series = compute_series(traj, cfg.law);
    const std::string csv = series_csv(series);
    write_text(fs::path(dir) / "diagnostics_from_snapshots.csv", csv);
    out << csv;
    return kExitOk;
}

std::string export_csv(const std::string& snapshot_path) { return snapshot_csv(read_snapshot(snapshot_path)); }

}  // namespace nsfv
