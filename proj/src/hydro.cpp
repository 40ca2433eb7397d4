#include "nsfv/hydro.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nsfv/errors.hpp"

namespace nsfv {

ScalarField TimeSamples::at(double t) const {
    if (times.empty() || times.size() != fields.size()) throw ConfigError("empty or inconsistent time samples");
    const double span = times.back() - times.front();
    const double slack = 1e-12 * std::max(1.0, std::abs(span));
    if (t < times.front() - slack || t > times.back() + slack) {
        std::ostringstream os;
        os << "time " << t << " outside sampled range [" << times.front() << ", " << times.back() << "]";
        throw ConfigError(os.str());
    }
    if (times.size() == 1 || t <= times.front()) return fields.front();
    if (t >= times.back()) return fields.back();
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    const auto k = static_cast<std::size_t>(it - times.begin());
    const double w = (t - times[k - 1]) / (times[k] - times[k - 1]);
    ScalarField out = fields[k - 1];
    out *= (1.0 - w);
    out.axpy(w, fields[k]);
    return out;
}

namespace {

void check_density(const ScalarField& rho, double floor) {
    for (std::size_t c = 0; c < rho.size(); ++c) {
        if (!(rho[c] > floor)) {
            std::ostringstream os;
            os << "density " << rho[c] << " at cell " << c << " below abort threshold " << floor;
            throw NonPhysicalState(os.str());
        }
    }
}

double speed(const VectorField& u, std::size_t c) {
    double acc = 0.0;
    for (int a = 0; a < u.dim(); ++a) acc += u[a][c] * u[a][c];
    return std::sqrt(acc);
}

}  // namespace

VectorField velocity(const HydroState& state, const HydroParams& params) {
    check_density(state.rho, params.rho_floor_abort);
    VectorField u(state.rho.grid());
    for (int a = 0; a < u.dim(); ++a)
        for (std::size_t c = 0; c < state.rho.size(); ++c) u[a][c] = state.m[a][c] / state.rho[c];
    return u;
}

double stable_dt(const HydroState& state, const ScalarField& theta, const VirialLaw& law,
                 const HydroParams& params) {
    const VectorField u = velocity(state, params);
    const auto& g = state.rho.grid();
    const double h = g.h();
    double dt = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < state.rho.size(); ++c) {
        const double c2 = std::max(pressure_drho(law, {state.rho[c], theta[c]}), params.c2_floor);
        dt = std::min(dt, params.cfl * h / (speed(u, c) + std::sqrt(c2)));
        const double nu = (2.0 * law.mu + std::abs(law.lambda)) / state.rho[c];
        if (nu > 0.0) dt = std::min(dt, h * h / (2.0 * g.dim * nu));
    }
    return dt;
}

std::size_t sound_floor_count(const HydroState& state, const ScalarField& theta, const VirialLaw& law,
                              const HydroParams& params) {
    std::size_t hits = 0;
    for (std::size_t c = 0; c < state.rho.size(); ++c)
        if (pressure_drho(law, {state.rho[c], theta[c]}) < params.c2_floor) ++hits;
    return hits;
}

HydroTendency hydro_rhs(const HydroState& state, const ScalarField& theta, const VirialLaw& law,
                        const HydroParams& params) {
    const auto& g = state.rho.grid();
    const VectorField u = velocity(state, params);

    ScalarField wave(g), p(g);
    for (std::size_t c = 0; c < state.rho.size(); ++c) {
        const ThermoPoint tp{state.rho[c], theta[c]};
        p[c] = pressure(law, tp);
        wave[c] = speed(u, c) + std::sqrt(std::max(pressure_drho(law, tp), params.c2_floor));
    }

    HydroTendency out{flux_divergence(llf_flux(state.rho, u, wave)), VectorField(g)};
    out.drho *= -1.0;

    const VectorField lap_u = laplacian(u);
    const VectorField grad_div = gradient(divergence(u));
    const VectorField grad_p = gradient(p);
    for (int j = 0; j < g.dim; ++j) {
        auto& dm = out.dm[j];
        dm = flux_divergence(llf_flux(state.m[j], u, wave));
        dm *= -1.0;
        dm.axpy(law.mu, lap_u[j]);
        dm.axpy(law.lambda + law.mu, grad_div[j]);
        dm.axpy(-1.0, grad_p[j]);
    }
    if (params.source) params.source(state.t, out);
    return out;
}

HydroState hydro_step(const HydroState& state, const ScalarField& theta, const ScalarField& theta_next,
                      const VirialLaw& law, double dt, const HydroParams& params) {
    const HydroTendency k1 = hydro_rhs(state, theta, law, params);
    HydroState stage = state;
    stage.rho.axpy(dt, k1.drho);
    stage.m.axpy(dt, k1.dm);
    stage.t = state.t + dt;
    check_density(stage.rho, params.rho_floor_abort);

    const HydroTendency k2 = hydro_rhs(stage, theta_next, law, params);
    HydroState next = state;
    next.rho *= 0.5;
    next.rho.axpy(0.5, stage.rho).axpy(0.5 * dt, k2.drho);
    next.m *= 0.5;
    next.m.axpy(0.5, stage.m).axpy(0.5 * dt, k2.dm);
    next.t = state.t + dt;
    check_density(next.rho, params.rho_floor_abort);
    if (!next.rho.all_finite() || !next.m.all_finite()) throw NonPhysicalState("non-finite hydro state");
    return next;
}

HydroSlab solve_hydro_slab(const HydroState& initial, const TimeSamples& theta_traj, const VirialLaw& law,
                           const HydroParams& params) {
    if (theta_traj.times.empty()) throw ConfigError("temperature trajectory has no samples");
    if (std::abs(theta_traj.times.front() - initial.t) > 1e-12 * std::max(1.0, std::abs(initial.t)))
        throw ConfigError("temperature trajectory does not start at the initial time");

    HydroSlab slab;
    slab.states.reserve(theta_traj.times.size());
    slab.states.push_back(initial);
    HydroState state = initial;
    for (std::size_t k = 1; k < theta_traj.times.size(); ++k) {
        const double t_out = theta_traj.times[k];
        while (state.t < t_out) {
            const ScalarField theta_now = theta_traj.at(state.t);
            double dt = stable_dt(state, theta_now, law, params);
            slab.sound_floor_hits += sound_floor_count(state, theta_now, law, params);
            bool last = false;
            if (state.t + dt >= t_out - 1e-14 * std::abs(t_out)) {
                dt = t_out - state.t;
                last = true;
            } else if (state.t + 2.0 * dt > t_out) {
                dt = 0.5 * (t_out - state.t);  // avoid a sliver step
            }
            state = hydro_step(state, theta_now, theta_traj.at(state.t + dt), law, dt, params);
            if (last) state.t = t_out;
            ++slab.steps;
        }
        slab.states.push_back(state);
    }
    return slab;
}

}  // namespace nsfv
