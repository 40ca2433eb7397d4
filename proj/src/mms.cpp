#include "nsfv/mms.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numbers>

#include "nsfv/errors.hpp"
#include "nsfv/hydro.hpp"
#include "nsfv/thermal.hpp"

namespace nsfv {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct ThermalExact {
    double a;
    [[nodiscard]] double theta(double x, double t) const { return 1.0 + a * std::sin(kTwoPi * x) * std::exp(-t); }
    [[nodiscard]] double theta_t(double x, double t) const { return -a * std::sin(kTwoPi * x) * std::exp(-t); }
    [[nodiscard]] double theta_x(double x, double t) const {
        return a * kTwoPi * std::cos(kTwoPi * x) * std::exp(-t);
    }
    [[nodiscard]] double theta_xx(double x, double t) const {
        return -a * kTwoPi * kTwoPi * std::sin(kTwoPi * x) * std::exp(-t);
    }
};

// Backward-Euler march of the thermal MMS with `steps` equal steps; returns θ(t_final).
ScalarField thermal_mms_solve(const VirialLaw& law, int n, int steps, double t_final, double eps, double a) {
    const PeriodicGrid grid(1, n);
    const ThermalExact ex{a};
    const ScalarField rho(grid, 1.0);
    const VectorField u(grid, 0.0);

    ScalarField g0(grid);
    for (std::size_t c = 0; c < g0.size(); ++c) g0[c] = good_unknown(law, {1.0, ex.theta(grid.center(c, 0), 0.0)}, eps);

    ThermalParams params;
    params.dt = t_final / steps;
    params.newton_tol = 1e-11;
    params.source = [&](double t) {
        ScalarField f(grid);
        for (std::size_t c = 0; c < f.size(); ++c) {
            const double x = grid.center(c, 0);
            const double th = ex.theta(x, t);
            const double tx = ex.theta_x(x, t);
            const double dgdt = dg_dtheta(law, {1.0, th}, eps) * ex.theta_t(x, t);
            const double diff = conductivity_dtheta(law, th) * tx * tx + conductivity(law, th) * ex.theta_xx(x, t);
            f[c] = dgdt - diff;
        }
        return f;
    };

    ThermalState state{g0, eps, 0.0};
    for (int k = 0; k < steps; ++k) state = thermal_step(state, rho, u, law, params);
    return theta_field(state.g, rho, law, eps);
}

double l2_error(const ScalarField& f, auto&& exact) {
    ScalarField diff = f;
    for (std::size_t c = 0; c < diff.size(); ++c) diff[c] -= exact(diff.grid().center(c, 0));
    return lp_norm(diff, 2.0);
}

void fill_orders(std::vector<MmsRow>& rows) {
    for (std::size_t i = 0; i < rows.size(); ++i)
        rows[i].order = i == 0 || rows[i].error <= 0.0 || rows[i - 1].error <= 0.0
                            ? std::numeric_limits<double>::quiet_NaN()
                            : std::log2(rows[i - 1].error / rows[i].error);
}

}  // namespace

std::vector<MmsRow> thermal_mms_space(const VirialLaw& law, const std::vector<int>& resolutions, double t_final,
                                      double eps, double amplitude, double dt_factor) {
    if (!(eps > 0.0)) throw ConfigError("thermal MMS needs eps > 0");
    const ThermalExact ex{amplitude};
    std::vector<MmsRow> rows;
    for (int n : resolutions) {
        const double h = 1.0 / n;
        const int steps = std::max(1, static_cast<int>(std::ceil(t_final / (dt_factor * h * h))));
        const ScalarField th = thermal_mms_solve(law, n, steps, t_final, eps, amplitude);
        rows.push_back({n, t_final / steps, l2_error(th, [&](double x) { return ex.theta(x, t_final); }), 0.0});
    }
    fill_orders(rows);
    return rows;
}

std::vector<MmsRow> thermal_mms_time(const VirialLaw& law, int n, const std::vector<int>& steps, double t_final,
                                     double eps, double amplitude) {
    if (steps.empty()) return {};
    int finest = 0;
    for (int s : steps) finest = std::max(finest, s);
    const ScalarField ref = thermal_mms_solve(law, n, 16 * finest, t_final, eps, amplitude);
    std::vector<MmsRow> rows;
    for (int s : steps) {
        ScalarField th = thermal_mms_solve(law, n, s, t_final, eps, amplitude);
        th.axpy(-1.0, ref);
        rows.push_back({n, t_final / s, lp_norm(th, 2.0), 0.0});
    }
    fill_orders(rows);
    return rows;
}

std::vector<MmsRow> hydro_mms(const VirialLaw& law, const std::vector<int>& resolutions, double t_final,
                              double amplitude) {
    const double a = amplitude;
    const double b = 0.5 * amplitude;
    const double visc = 2.0 * law.mu + law.lambda;
    std::vector<MmsRow> rows;
    for (int n : resolutions) {
        const PeriodicGrid grid(1, n);
        auto exact_rho = [&](double x, double t) { return 1.0 + a * std::sin(kTwoPi * (x - t)); };
        auto exact_u = [&](double x, double t) { return 0.5 + b * std::sin(kTwoPi * (x - t)); };

        HydroState state{ScalarField(grid), VectorField(grid), 0.0};
        for (std::size_t c = 0; c < grid.size(); ++c) {
            const double x = grid.center(c, 0);
            state.rho[c] = exact_rho(x, 0.0);
            state.m[0][c] = state.rho[c] * exact_u(x, 0.0);
        }

        HydroParams params;
        params.source = [&](double t, HydroTendency& tend) {
            for (std::size_t c = 0; c < grid.size(); ++c) {
                const double ph = kTwoPi * (grid.center(c, 0) - t);
                const double s = std::sin(ph);
                const double co = std::cos(ph);
                const double r = 1.0 + a * s;
                const double u = 0.5 + b * s;
                const double rt = -a * kTwoPi * co;
                const double rx = a * kTwoPi * co;
                const double ut = -b * kTwoPi * co;
                const double ux = b * kTwoPi * co;
                const double uxx = -b * kTwoPi * kTwoPi * s;
                tend.drho[c] += rt + rx * u + r * ux;
                tend.dm[0][c] += rt * u + r * ut + rx * u * u + 2.0 * r * u * ux +
                                 pressure_drho(law, {r, 1.0}) * rx - visc * uxx;
            }
        };

        TimeSamples theta{{0.0, t_final}, {ScalarField(grid, 1.0), ScalarField(grid, 1.0)}};
        const HydroSlab slab = solve_hydro_slab(state, theta, law, params);
        ScalarField diff = slab.states.back().rho;
        for (std::size_t c = 0; c < diff.size(); ++c) diff[c] -= exact_rho(grid.center(c, 0), t_final);
        rows.push_back({n, t_final / static_cast<double>(slab.steps), lp_norm(diff, 1.0), 0.0});
    }
    fill_orders(rows);
    return rows;
}

std::string mms_csv(const std::vector<MmsRow>& rows) {
    auto num = [](double v) {
        if (std::isnan(v)) return std::string();
        char buf[64];
        const auto r = std::to_chars(buf, buf + sizeof buf, v);
        return std::string(buf, r.ptr);
    };
    std::string out = "n,dt,error,order\n";
    for (const auto& r : rows) out += std::to_string(r.n) + "," + num(r.dt) + "," + num(r.error) + "," + num(r.order) + "\n";
    return out;
}

}  // namespace nsfv
