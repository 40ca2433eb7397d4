// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "nsfv/errors.hpp"
#include "nsfv/mms.hpp"
#include "nsfv/run.hpp"

using namespace nsfv;
namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Outcome {
    bool pass = false;
    std::string detail;
};

// Radical inverse in base b of i (Halton sequence).
double halton(int i, int base) {
    double f = 1.0, r = 0.0;
    for (int k = i; k > 0; k /= base) {
        f /= base;
        r += f * (k % base);
    }
    return r;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

RunConfig config(const std::string& name) { return load_config(NSFV_SOURCE_DIR "/configs/" + name); }

// Maxwell and Gibbs residuals by central differences, normalized by 1 + |reference term|.
Outcome state_law_consistency() {
    const double h = 1e-5;
    double maxwell = 0.0, gibbs_theta = 0.0, gibbs_rho = 0.0;
    for (const VirialLaw& law : {laws::reference(), laws::nonmonotone_demo()}) {
        for (int i = 1; i <= 100; ++i) {
            const ThermoPoint p{0.05 + 4.95 * halton(i, 2), 0.05 + 4.95 * halton(i, 3)};
            auto dr = [&](auto f) { return (f(ThermoPoint{p.rho + h, p.theta}) - f(ThermoPoint{p.rho - h, p.theta})) / (2 * h); };
            auto dt = [&](auto f) { return (f(ThermoPoint{p.rho, p.theta + h}) - f(ThermoPoint{p.rho, p.theta - h})) / (2 * h); };
            const auto P = [&](ThermoPoint q) { return pressure(law, q); };
            const auto e = [&](ThermoPoint q) { return internal_energy(law, q); };
            const auto s = [&](ThermoPoint q) { return entropy(law, q); };
            const double pv = P(p);
            maxwell = std::max(maxwell, std::abs(pv - p.rho * p.rho * dr(e) - p.theta * dt(P)) / (1 + std::abs(pv)));
            const double de_t = dt(e) / p.theta;
            gibbs_theta = std::max(gibbs_theta, std::abs(dt(s) - de_t) / (1 + std::abs(de_t)));
            const double dp_r = dt(P) / (p.rho * p.rho);
            gibbs_rho = std::max(gibbs_rho, std::abs(dr(s) + dp_r) / (1 + std::abs(dp_r)));
        }
    }
    return {maxwell < 1e-6 && gibbs_theta < 1e-6 && gibbs_rho < 1e-6,
            "maxwell " + fmt(maxwell) + ", gibbs-theta " + fmt(gibbs_theta) + ", gibbs-rho " + fmt(gibbs_rho)};
}

// 10⁴ Halton points in (log ρ, log θ, log ε), for two admissible laws.
Outcome inversion_round_trip() {
    double worst = 0.0;
    for (const VirialLaw& law : {laws::reference(), laws::concave()}) {
        for (int i = 1; i <= 10000; ++i) {
            const double rho = std::pow(10.0, -2.0 + 4.0 * halton(i, 2));
            const double theta = std::pow(10.0, -3.0 + 6.0 * halton(i, 3));
            const double eps = std::pow(10.0, -4.0 + 3.0 * halton(i, 5));
            const double g = good_unknown(law, {rho, theta}, eps);
            worst = std::max(worst, std::abs(theta_of_g(law, rho, g, eps) - theta) / theta);
        }
    }
    return {worst < 1e-10, "max relative round-trip error " + fmt(worst) + " over 2x10^4 points"};
}

std::vector<std::string> structural_failures(const ValidationReport& r) {
    std::vector<std::string> out;
    const auto& ids = structural_check_ids();
    for (const auto& f : r.failures())
        if (std::find(ids.begin(), ids.end(), f) != ids.end()) out.push_back(f);
    return out;
}

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& x : v) s += (s.empty() ? "" : " ") + x;
    return s.empty() ? "none" : s;
}

Outcome validator_discrimination() {
    const ValidationReport ref = validate_law(laws::reference(), 2);
    const ValidationReport cst = validate_law(laws::constant_b2(), 2);
    const ValidationReport nc = validate_law(laws::nonconcave(), 2);
    const auto nc_fail = structural_failures(nc);
    const double w = nc.find("concavity-P5").witness_theta;
    const bool pass = ref.all_pass() && structural_failures(cst) == std::vector<std::string>{"growth-P6bis"} &&
                      nc_fail == std::vector<std::string>{"concavity-P5"} && w >= 1.5 && w <= 3.0;
    return {pass, "reference fails [" + join(ref.failures()) + "], constant-B2 fails [" + join(structural_failures(cst)) +
                      "], nonconcave fails [" + join(nc_fail) + "] at theta " + fmt(w)};
}

Outcome nonmonotone_detection() {
    const auto demo = detect_nonmonotone(laws::nonmonotone_demo(), ScanGrid{});
    const auto ref = detect_nonmonotone(laws::reference(), ScanGrid{});
    const double slope = demo ? pressure_drho(laws::nonmonotone_demo(), *demo) : 0.0;
    return {demo.has_value() && slope < -0.01 && !ref.has_value(),
            "demo witness dP/drho " + fmt(slope) + (ref ? ", reference has a witness" : ", reference none")};
}

Outcome conservation() {
    const VirialLaw law = laws::reference();
    const PeriodicGrid g(1, 64);
    HydroState s{ScalarField(g), VectorField(g), 0.0};
    for (std::size_t c = 0; c < g.size(); ++c) {
        s.rho[c] = 1.0 + 0.1 * std::sin(kTwoPi * g.center(c, 0));
        s.m[0][c] = s.rho[c] * (0.5 + 0.1 * std::cos(kTwoPi * g.center(c, 0)));
    }
    const ScalarField theta(g, 1.0);
    const double mass0 = integrate(s.rho), mom0 = integrate(s.m[0]);
    for (int k = 0; k < 1000; ++k) s = hydro_step(s, theta, theta, law, stable_dt(s, theta, law));
    const double dmass = std::abs(integrate(s.rho) - mass0) / mass0;
    const double dmom = std::abs(integrate(s.m[0]) - mom0) / std::abs(mom0);

    ScalarField th(g);
    for (std::size_t c = 0; c < g.size(); ++c) th[c] = 1.0 + 0.5 * std::sin(kTwoPi * g.center(c, 0));
    const ScalarField rho(g, 1.0);
    const VectorField u(g, 0.0);
    ThermalState ts{initial_g(rho, th, law, 1e-3), 1e-3, 0.0};
    ThermalParams tp;
    tp.dt = 1e-4;
    const double g0 = integrate(ts.g);
    for (int k = 0; k < 500; ++k) ts = thermal_step(ts, rho, u, law, tp);
    const double dg = std::abs(integrate(ts.g) - g0) / g0;
    return {dmass < 1e-11 && dmom < 1e-11 && dg < 1e-11,
            "mass " + fmt(dmass) + ", momentum " + fmt(dmom) + " over 1000 hydro steps; g " + fmt(dg) + " over 500 thermal steps"};
}

// Gaussian density pulse at frozen θ = 0; the right-going half is tracked by
// the centroid of ρ − 1 over x > 1/2 between t = 0.05 and t = 0.1.
Outcome acoustic_speed() {
    VirialLaw law = laws::reference();
    law.mu = 1e-3;
    const PeriodicGrid g(1, 256);
    HydroState s{ScalarField(g), VectorField(g), 0.0};
    for (std::size_t c = 0; c < g.size(); ++c) {
        const double x = g.center(c, 0) - 0.5;
        s.rho[c] = 1.0 + 1e-3 * std::exp(-x * x / (2 * 0.03 * 0.03));
    }
    const std::vector<double> times{0.0, 0.05, 0.1};
    const HydroSlab slab = solve_hydro_slab(s, TimeSamples{times, std::vector<ScalarField>(3, ScalarField(g, 0.0))}, law);
    auto centroid = [&](const ScalarField& rho) {
        double w = 0.0, wx = 0.0;
        for (std::size_t c = 0; c < g.size(); ++c) {
            const double x = g.center(c, 0);
            if (x <= 0.5) continue;
            w += rho[c] - 1.0;
            wx += (rho[c] - 1.0) * x;
        }
        return wx / w;
    };
    const double speed = (centroid(slab.states[2].rho) - centroid(slab.states[1].rho)) / 0.05;
    const double rel = std::abs(speed / std::sqrt(5.0) - 1.0);
    return {rel < 0.02, "speed " + fmt(speed) + " vs sqrt(5) = " + fmt(std::sqrt(5.0)) + ", relative " + fmt(rel)};
}

std::string orders(const std::vector<MmsRow>& rows) {
    std::string s;
    for (std::size_t i = 1; i < rows.size(); ++i) s += (i > 1 ? "/" : "") + fmt(rows[i].order);
    return s;
}

bool orders_in(const std::vector<MmsRow>& rows, double lo, double hi) {
    for (std::size_t i = 1; i < rows.size(); ++i)
        if (!(rows[i].order >= lo && rows[i].order <= hi)) return false;
    return rows.size() > 1;
}

Outcome mms_orders() {
    const RunConfig th = config("mms_thermal.ini");
    const RunConfig hy = config("mms_hydro.ini");
    const auto space = thermal_mms_space(th.law, th.mms.resolutions, th.mms.t_final, th.eps, th.mms.amplitude);
    const auto time = thermal_mms_time(th.law, th.mms.time_n, th.mms.steps, th.mms.t_final, th.eps, th.mms.amplitude);
    const auto hydro = hydro_mms(hy.law, hy.mms.resolutions, hy.mms.t_final, hy.mms.amplitude);
    return {orders_in(space, 1.8, 2.2) && orders_in(time, 0.9, 1.1) && orders_in(hydro, 0.9, 1e9),
            "thermal space " + orders(space) + ", thermal time " + orders(time) + ", hydro " + orders(hydro)};
}

struct Converged {
    SlabTrajectory traj;
    SlabReport report;
};

Converged solve_small(int n, int steps, double omega, double eps) {
    RunConfig cfg = config("small_data.ini");
    cfg.n = n;
    cfg.thermal_steps_per_slab = steps;
    cfg.fixed_point.omega = omega;
    cfg.eps = eps;
    auto [hydro, g0] = initial_state(cfg);
    Converged c;
    c.traj = fixed_point_solve(hydro, g0, cfg.law, cfg.fixed_point_config(), eps, &c.report);
    return c;
}

Outcome fixed_point() {
    const RunConfig cfg = config("small_data.ini");
    const Converged a = solve_small(64, 20, 0.5, 1e-3);
    const Converged b = solve_small(64, 20, 1.0, 1e-3);
    const double dist = slab_distance(a.traj.times, a.traj.theta, b.traj.theta) / slab_norm(a.traj.times, a.traj.theta);
    const double last = a.report.residual_norms.back();
    const bool pass = a.report.converged && a.report.iterations <= 30 && last < 1e-6 && dist < 10 * cfg.fixed_point.tol;
    return {pass, std::to_string(a.report.iterations) + " iterations, final relative update " + fmt(last) +
                      ", omega 0.5 vs 1.0 distance " + fmt(dist)};
}

Outcome inequalities() {
    const VirialLaw law = config("small_data.ini").law;
    bool pass = true;
    std::vector<double> e_mag, s_mag, g_mag;
    std::string detail;
    for (int k = 0; k < 3; ++k) {
        const int n = 64 << k, steps = 20 << k;
        const Converged c = solve_small(n, steps, 0.5, 1e-3);
        const DiagnosticSeries s = compute_series(c.traj, law);
        const InequalityTolerance tol{kDefaultCTol, 0.05 / steps, 1.0 / n};
        const InequalityVerdict v = check_inequalities(c.traj, s, law, tol);
        pass = pass && v.all_pass();
        double e = 0.0, sum = 0.0;
        for (double r : energy_inequality_residual(s)) e = std::max(e, std::abs(r));
        for (double r : entropy_inequality_residual(c.traj, law)) sum += r;
        e_mag.push_back(e);
        s_mag.push_back(std::abs(sum));
        g_mag.push_back(v.g_balance_relative);
        detail += (k ? "; " : "") + std::string("n=") + std::to_string(n) + " E " + fmt(e) + " S " + fmt(std::abs(sum)) +
                  " g " + fmt(v.g_balance_relative) + (v.all_pass() ? "" : " (check failed)");
    }
    for (std::size_t i = 1; i < e_mag.size(); ++i)
        pass = pass && e_mag[i] < e_mag[i - 1] && s_mag[i] < s_mag[i - 1] && g_mag[i] < g_mag[i - 1];
    return {pass, detail};
}

Outcome continuation() {
    std::vector<double> dist;
    ScalarField prev;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        const Converged c = solve_small(64, 20, 0.5, eps);
        if (prev.size() > 0) {
            ScalarField d = c.traj.theta.back();
            d.axpy(-1.0, prev);
            dist.push_back(lp_norm(d, 2.0));
        }
        prev = c.traj.theta.back();
    }
    return {dist.size() == 2 && dist[1] < dist[0], "distances " + fmt(dist[0]) + " then " + fmt(dist[1])};
}

Outcome determinism() {
    const fs::path root = fs::temp_directory_path() / "nsfv_acceptance";
    fs::remove_all(root);
    std::vector<std::string> csv;
    RunResult last;
    for (const char* tag : {"a", "b"}) {
        RunConfig cfg = config("small_data.ini");
        cfg.out_dir = (root / tag).string();
        last = run_simulation(cfg);
        csv.push_back(slurp(root / tag / "diagnostics.csv"));
    }
    const Snapshot snap = snapshot_of(last.trajectory, last.trajectory.samples() - 1);
    const fs::path path = root / "final.nsfv";
    write_snapshot(path.string(), snap);
    const Snapshot back = read_snapshot(path.string());
    bool exact = encode_snapshot(back) == encode_snapshot(snap) && back.time == snap.time;
    for (std::size_t i = 0; i < snap.fields.size() && exact; ++i)
        for (std::size_t c = 0; c < snap.grid.size(); ++c)
            if (std::bit_cast<std::uint64_t>(back.fields[i][c]) != std::bit_cast<std::uint64_t>(snap.fields[i][c])) exact = false;
    const bool same_csv = !csv[0].empty() && csv[0] == csv[1];
    return {last.exit_code == kExitOk && same_csv && exact,
            std::string("diagnostics.csv ") + (same_csv ? "identical" : "differs") + " across runs (" +
                std::to_string(csv[0].size()) + " bytes), snapshot round trip " + (exact ? "bit-exact" : "differs")};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"state-law consistency", state_law_consistency},
        {"inversion round trip", inversion_round_trip},
        {"validator discrimination", validator_discrimination},
        {"non-monotonicity detection", nonmonotone_detection},
        {"conservation", conservation},
        {"acoustic speed", acoustic_speed},
        {"manufactured-solution orders", mms_orders},
        {"fixed-point convergence", fixed_point},
        {"inequality suite", inequalities},
        {"eps continuation", continuation},
        {"determinism and snapshot I/O", determinism},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("%s %2zu %s: %s [%.2fs]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str(), secs);
        std::fflush(stdout);
        if (!o.pass) ++failed;
    }
    std::printf("%d of %zu criteria failed\n", failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
