#include "nsfv/coupler.hpp"

#include <cmath>
#include <sstream>

#include "nsfv/errors.hpp"

namespace nsfv {

std::string RunReport::to_text() const {
    std::ostringstream os;
    os.precision(6);
    os << std::scientific;
    os << "status: " << status << "\n";
    for (std::size_t s = 0; s < slabs.size(); ++s) {
        const auto& sl = slabs[s];
        os << "slab " << s << ": iterations=" << sl.iterations << " converged=" << (sl.converged ? "yes" : "no")
           << "\n";
        for (std::size_t k = 0; k < sl.residual_norms.size(); ++k)
            os << "  iter " << k + 1 << " residual=" << sl.residual_norms[k] << " update=" << sl.update_norms[k]
               << "\n";
    }
    return os.str();
}

double slab_norm(const std::vector<double>& times, const std::vector<ScalarField>& f) {
    double acc = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        double w = 0.0;
        if (k > 0) w += 0.5 * (times[k] - times[k - 1]);
        if (k + 1 < f.size()) w += 0.5 * (times[k + 1] - times[k]);
        if (f.size() == 1) w = 1.0;
        acc += w * inner(f[k], f[k]);
    }
    return std::sqrt(acc);
}

double slab_distance(const std::vector<double>& times, const std::vector<ScalarField>& a,
                     const std::vector<ScalarField>& b) {
    std::vector<ScalarField> diff = a;
    for (std::size_t k = 0; k < diff.size(); ++k) diff[k].axpy(-1.0, b[k]);
    return slab_norm(times, diff);
}

ScalarField initial_g(const ScalarField& rho0, const ScalarField& theta0, const VirialLaw& law, double eps) {
    ScalarField g(rho0.grid());
    for (std::size_t c = 0; c < g.size(); ++c) g[c] = good_unknown(law, {rho0[c], theta0[c]}, eps);
    return g;
}

SlabTrajectory apply_L(const TimeSamples& theta, const HydroState& hydro0, const ScalarField& g0,
                       const VirialLaw& law, double eps, const HydroParams& hydro_params,
                       const ThermalParams& thermal_params) {
    for (const auto& th : theta.fields)
        if (th.min() < 0.0) throw NonPhysicalState("prescribed temperature must be non-negative");

    const HydroSlab hydro = solve_hydro_slab(hydro0, theta, law, hydro_params);
    SlabTrajectory traj;
    traj.times = theta.times;
    traj.eps = eps;
    for (const auto& st : hydro.states) {
        traj.rho.push_back(st.rho);
        traj.m.push_back(st.m);
        traj.u.push_back(velocity(st, hydro_params));
    }
    ThermalSlab thermal = solve_thermal_slab(g0, traj.times, traj.rho, traj.u, law, eps, thermal_params);
    traj.g = std::move(thermal.g);
    traj.theta = std::move(thermal.theta);
    return traj;
}

SlabTrajectory fixed_point_solve(const HydroState& hydro0, const ScalarField& g0, const VirialLaw& law,
                                 const FixedPointConfig& config, double eps, SlabReport* report,
                                 const HydroParams& hydro_params, const ThermalParams& thermal_params) {
    if (!(config.omega > 0.0 && config.omega <= 1.0)) throw ConfigError("omega must lie in (0, 1]");
    if (!(config.tol > 0.0)) throw ConfigError("fixed-point tolerance must be positive");
    if (config.steps_per_slab < 1) throw ConfigError("steps_per_slab must be at least 1");

    // Discrete initial energy must be finite.
    {
        double energy = 0.0;
        const ScalarField theta0 = theta_field(g0, hydro0.rho, law, eps);
        for (std::size_t c = 0; c < g0.size(); ++c) {
            double m2 = 0.0;
            for (int a = 0; a < hydro0.m.dim(); ++a) m2 += hydro0.m[a][c] * hydro0.m[a][c];
            energy += m2 / (2.0 * hydro0.rho[c]) + hydro0.rho[c] * internal_energy(law, {hydro0.rho[c], theta0[c]});
        }
        if (!std::isfinite(energy)) throw ConfigError("initial energy is not finite");
    }

    SlabReport local;
    SlabReport& rep = report ? *report : local;
    rep = SlabReport{};

    TimeSamples theta;
    const int steps = config.steps_per_slab;
    for (int k = 0; k <= steps; ++k)
        theta.times.push_back(k == steps ? hydro0.t + config.slab_length
                                         : hydro0.t + config.slab_length * k / steps);
    theta.fields.assign(theta.times.size(), theta_field(g0, hydro0.rho, law, eps));

    for (int it = 0; it < config.max_iter; ++it) {
        SlabTrajectory traj = apply_L(theta, hydro0, g0, law, eps, hydro_params, thermal_params);
        const double base = std::max(slab_norm(theta.times, theta.fields), 1e-300);
        const double residual = slab_distance(theta.times, traj.theta, theta.fields) / base;
        rep.iterations = it + 1;
        rep.residual_norms.push_back(residual);
        rep.update_norms.push_back(config.omega * residual);
        if (residual < config.tol) {
            rep.converged = true;
            return traj;
        }
        for (std::size_t k = 0; k < theta.fields.size(); ++k) {
            theta.fields[k] *= (1.0 - config.omega);
            theta.fields[k].axpy(config.omega, traj.theta[k]);
        }
    }
    std::ostringstream os;
    os << "fixed point not reached in " << config.max_iter << " iterations (last residual "
       << rep.residual_norms.back() << ")";
    throw ConvergenceFailure(os.str(), rep.residual_norms);
}

SlabTrajectory continue_slabs(const HydroState& hydro0, const ScalarField& g0, const VirialLaw& law,
                              const FixedPointConfig& config, double eps, double t_final, RunReport* report,
                              const HydroParams& hydro_params, const ThermalParams& thermal_params) {
    RunReport local;
    RunReport& rep = report ? *report : local;
    rep = RunReport{};
    rep.status = "running";

    SlabTrajectory all;
    all.eps = eps;
    HydroState hydro = hydro0;
    ScalarField g = g0;
    int slab_index = 0;
    while (hydro.t < t_final - 1e-12 * std::max(1.0, std::abs(t_final))) {
        FixedPointConfig cfg = config;
        const double remaining = t_final - hydro.t;
        if (remaining < config.slab_length * (1.0 + 1e-9)) {
            // Shorten the last slab; keep the thermal step close to the nominal one.
            cfg.slab_length = remaining;
            cfg.steps_per_slab = std::max(
                1, static_cast<int>(std::lround(config.steps_per_slab * remaining / config.slab_length)));
        }
        rep.slabs.emplace_back();
        SlabTrajectory slab;
        try {
            slab = fixed_point_solve(hydro, g, law, cfg, eps, &rep.slabs.back(), hydro_params, thermal_params);
        } catch (const ConvergenceFailure& e) {
            rep.status = "convergence failure in slab " + std::to_string(slab_index);
            throw ConvergenceFailure("slab " + std::to_string(slab_index) + ": " + e.what(), e.history());
        } catch (const Error& e) {
            rep.status = "error in slab " + std::to_string(slab_index) + ": " + e.what();
            throw;
        }
        const std::size_t first = all.times.empty() ? 0 : 1;
        for (std::size_t k = first; k < slab.samples(); ++k) {
            all.times.push_back(slab.times[k]);
            all.rho.push_back(slab.rho[k]);
            all.m.push_back(slab.m[k]);
            all.u.push_back(slab.u[k]);
            all.theta.push_back(slab.theta[k]);
            all.g.push_back(slab.g[k]);
        }
        const std::size_t last = slab.samples() - 1;
        hydro = HydroState{slab.rho[last], slab.m[last], slab.times[last]};
        g = slab.g[last];
        ++slab_index;
    }
    rep.status = "converged";
    return all;
}

}  // namespace nsfv
