#include "nsfv/thermal.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "nsfv/errors.hpp"

namespace nsfv {

ScalarField theta_field(const ScalarField& g, const ScalarField& rho, const VirialLaw& law, double eps) {
    ScalarField theta(g.grid());
    for (std::size_t c = 0; c < g.size(); ++c) {
        try {
            theta[c] = theta_of_g(law, rho[c], g[c], eps);
        } catch (const Error& e) {
            std::ostringstream os;
            os << "temperature inversion failed at cell " << c << " (rho=" << rho[c] << ", g=" << g[c]
               << "): " << e.what();
            throw NonPhysicalState(os.str());
        }
    }
    return theta;
}

namespace {

ScalarField speed_field(const VectorField& u) {
    ScalarField s(u.grid());
    for (std::size_t c = 0; c < s.size(); ++c) {
        double acc = 0.0;
        for (int a = 0; a < u.dim(); ++a) acc += u[a][c] * u[a][c];
        s[c] = std::sqrt(acc);
    }
    return s;
}

// div(κ(θ)∇θ) with face-averaged conductivity.
ScalarField conduction(const ScalarField& theta, const ScalarField& kappa) {
    const auto& g = theta.grid();
    ScalarField out(g);
    const double inv = 1.0 / (g.h() * g.h());
    for (std::size_t c = 0; c < out.size(); ++c) {
        double acc = 0.0;
        for (int a = 0; a < g.dim; ++a) {
            const std::size_t r = g.shift(c, a, 1), l = g.shift(c, a, -1);
            acc += 0.5 * (kappa[c] + kappa[r]) * (theta[r] - theta[c]);
            acc -= 0.5 * (kappa[c] + kappa[l]) * (theta[c] - theta[l]);
        }
        out[c] = acc * inv;
    }
    return out;
}

// Fields that stay fixed during one implicit step.
struct StepFrame {
    ScalarField div_u;
    ScalarField shear_heating;  // S:∇u
    ScalarField speed;
};

StepFrame make_frame(const VectorField& u, const VirialLaw& law) {
    const TensorField s = stress_tensor(u, law.mu, law.lambda);
    return {divergence(u), stress_contract(s, gradient(u)), speed_field(u)};
}

ScalarField residual_with_frame(const ScalarField& g_new, const ScalarField& theta, const ScalarField& g_old,
                                const ScalarField& rho, const VectorField& u, const StepFrame& frame,
                                const VirialLaw& law, double eps, double dt, const ScalarField* forcing) {
    const auto& grid = g_new.grid();
    ScalarField kappa(grid);
    for (std::size_t c = 0; c < kappa.size(); ++c) kappa[c] = conductivity(law, theta[c]);

    ScalarField r = flux_divergence(llf_flux(g_new, u, frame.speed));
    const ScalarField diff = conduction(theta, kappa);
    const double inv_dt = 1.0 / dt;
    for (std::size_t c = 0; c < r.size(); ++c) {
        const double pt = reduced_pressure(law, {rho[c], theta[c]}, eps);
        r[c] += (g_new[c] - g_old[c]) * inv_dt + pt * frame.div_u[c] - frame.shear_heating[c] - diff[c];
        if (forcing) r[c] -= (*forcing)[c];
    }
    return r;
}

double l2(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
}

}  // namespace

ScalarField thermal_residual(const ScalarField& g_new, const ScalarField& g_old, const ScalarField& rho,
                             const VectorField& u, const VirialLaw& law, double eps, double dt,
                             const ScalarField* forcing) {
    const StepFrame frame = make_frame(u, law);
    return residual_with_frame(g_new, theta_field(g_new, rho, law, eps), g_old, rho, u, frame, law, eps, dt,
                               forcing);
}

namespace {

Eigen::SparseMatrix<double> assemble_jacobian(const ScalarField& g_new, const ScalarField& theta,
                                              const ScalarField& rho, const VectorField& u,
                                              const StepFrame& frame, const VirialLaw& law, double eps,
                                              double dt, bool lag_kappa) {
    const auto& grid = g_new.grid();
    const std::size_t cells = g_new.size();
    const double h = grid.h();
    const double inv_h2 = 1.0 / (h * h);

    std::vector<double> dtheta_dg(cells), kappa(cells), dkappa(cells);
    for (std::size_t c = 0; c < cells; ++c) {
        const ThermoPoint tp{rho[c], theta[c]};
        dtheta_dg[c] = 1.0 / dg_dtheta(law, tp, eps);
        kappa[c] = conductivity(law, theta[c]);
        dkappa[c] = lag_kappa ? 0.0 : conductivity_dtheta(law, theta[c]);
    }

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(cells * static_cast<std::size_t>(1 + 4 * grid.dim));
    const auto row = [](std::size_t c) { return static_cast<int>(c); };

    for (std::size_t c = 0; c < cells; ++c) {
        const ThermoPoint tp{rho[c], theta[c]};
        double diag = 1.0 / dt + reduced_pressure_dtheta(law, tp, eps) * dtheta_dg[c] * frame.div_u[c];
        trip.emplace_back(row(c), row(c), diag);
    }

    for (int a = 0; a < grid.dim; ++a) {
        const auto& va = u[a];
        for (std::size_t c = 0; c < cells; ++c) {
            // Face between c and its right neighbour r; contributes +F/h to row c, −F/h to row r.
            const std::size_t r = grid.shift(c, a, 1);
            const double s = std::max(frame.speed[c], frame.speed[r]);
            const double dfc = (0.5 * va[c] + 0.5 * s) / h;
            const double dfr = (0.5 * va[r] - 0.5 * s) / h;
            trip.emplace_back(row(c), row(c), dfc);
            trip.emplace_back(row(c), row(r), dfr);
            trip.emplace_back(row(r), row(c), -dfc);
            trip.emplace_back(row(r), row(r), -dfr);

            // Conduction flux q = κ_f(θ_r − θ_c)/h²; residual carries −(q_{c+½} − q_{c−½}).
            const double kf = 0.5 * (kappa[c] + kappa[r]);
            const double jump = theta[r] - theta[c];
            const double dq_dc = (0.5 * dkappa[c] * jump - kf) * inv_h2 * dtheta_dg[c];
            const double dq_dr = (0.5 * dkappa[r] * jump + kf) * inv_h2 * dtheta_dg[r];
            trip.emplace_back(row(c), row(c), -dq_dc);
            trip.emplace_back(row(c), row(r), -dq_dr);
            trip.emplace_back(row(r), row(c), dq_dc);
            trip.emplace_back(row(r), row(r), dq_dr);
        }
    }
    Eigen::SparseMatrix<double> jac(static_cast<Eigen::Index>(cells), static_cast<Eigen::Index>(cells));
    jac.setFromTriplets(trip.begin(), trip.end());
    return jac;
}

}  // namespace

ThermalState thermal_step(const ThermalState& state, const ScalarField& rho, const VectorField& u,
                          const VirialLaw& law, const ThermalParams& params, ThermalStepInfo* info) {
    if (!(state.eps > 0.0)) throw ConfigError("thermal_step requires eps > 0");
    if (!(params.dt > 0.0)) throw ConfigError("thermal_step requires dt > 0");
    const double dt = params.dt;
    const double t_new = state.t + dt;
    const StepFrame frame = make_frame(u, law);
    ScalarField forcing;
    if (params.source) forcing = params.source(t_new);
    const ScalarField* f = params.source ? &forcing : nullptr;

    ScalarField g = state.g;
    ScalarField theta = theta_field(g, rho, law, state.eps);
    std::vector<double> history;
    const std::size_t cells = g.size();

    for (int it = 0; it <= params.newton_max; ++it) {
        const ScalarField r = residual_with_frame(g, theta, state.g, rho, u, frame, law, state.eps, dt, f);
        const double rel = l2(r.values()) * dt / std::max(l2(g.values()), 1e-300);
        history.push_back(rel);
        const bool converged = rel < params.newton_tol;
        if (!converged && it == params.newton_max) break;

        const auto jac = assemble_jacobian(g, theta, rho, u, frame, law, state.eps, dt, params.picard_lag);
        Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
        lu.compute(jac);
        if (lu.info() != Eigen::Success) throw NonPhysicalState("thermal Jacobian factorization failed");
        Eigen::VectorXd rhs(static_cast<Eigen::Index>(cells));
        for (std::size_t c = 0; c < cells; ++c) rhs[static_cast<Eigen::Index>(c)] = -r[c];
        const Eigen::VectorXd delta = lu.solve(rhs);

        // Halve the update until g stays admissible.
        double step = 1.0;
        ScalarField trial(g.grid());
        for (int k = 0; k < 40; ++k) {
            bool ok = true;
            for (std::size_t c = 0; c < cells; ++c) {
                trial[c] = g[c] + step * delta[static_cast<Eigen::Index>(c)];
                if (!(trial[c] > 0.0)) ok = false;
            }
            if (ok) break;
            step *= 0.5;
        }
        g = trial;
        theta = theta_field(g, rho, law, state.eps);
        // One correction past the tolerance drives the residual to O(tol²), which keeps
        // the conservative structure exact to round-off over long runs.
        if (converged) {
            if (info) {
                info->iterations = it + 1;
                info->final_residual = rel;
            }
            if (g.min() <= 0.0) throw NonPhysicalState("thermal step lost positivity of g");
            return ThermalState{std::move(g), state.eps, t_new};
        }
    }
    std::ostringstream os;
    os << "thermal Newton did not converge in " << params.newton_max << " iterations (relative residual "
       << history.back() << ")";
    throw ConvergenceFailure(os.str(), history);
}

double conduction_integrand(const ScalarField& theta, const VirialLaw& law) {
    const VectorField grad = gradient(theta);
    double acc = 0.0;
    for (std::size_t c = 0; c < theta.size(); ++c) {
        double g2 = 0.0;
        for (int a = 0; a < grad.dim(); ++a) g2 += grad[a][c] * grad[a][c];
        acc += conductivity(law, theta[c]) * g2 / (theta[c] * theta[c]);
    }
    return acc * theta.grid().cell_volume();
}

double velocity_weighted_integrand(const VectorField& u, const ScalarField& theta) {
    const TensorField du = gradient(u);
    double acc = 0.0;
    for (std::size_t c = 0; c < theta.size(); ++c) {
        double g2 = 0.0;
        for (const auto& comp : du.comp) g2 += comp[c] * comp[c];
        acc += g2 / theta[c];
    }
    return acc * theta.grid().cell_volume();
}

ThermalSlab solve_thermal_slab(const ScalarField& g0, const std::vector<double>& times,
                               const std::vector<ScalarField>& rho_traj, const std::vector<VectorField>& u_traj,
                               const VirialLaw& law, double eps, const ThermalParams& params) {
    if (times.empty() || rho_traj.size() != times.size() || u_traj.size() != times.size())
        throw ConfigError("thermal slab trajectories do not cover the sample times");
    if (g0.min() <= 0.0) throw NonPhysicalState("initial g must be positive");

    ThermalSlab slab;
    slab.times = times;
    ThermalState state{g0, eps, times.front()};
    auto record = [&](const ScalarField& g, std::size_t k) {
        slab.g.push_back(g);
        slab.theta.push_back(theta_field(g, rho_traj[k], law, eps));
    };
    record(g0, 0);

    double prev_cond = conduction_integrand(slab.theta[0], law);
    double prev_vel = velocity_weighted_integrand(u_traj[0], slab.theta[0]);
    auto theta_gamma = [&](const ScalarField& th) {
        double acc = 0.0;
        for (double v : th.values()) acc += std::pow(v, law.gamma_theta);
        return acc * th.grid().cell_volume();
    };
    slab.apriori.sup_theta_gamma = theta_gamma(slab.theta[0]);

    for (std::size_t k = 1; k < times.size(); ++k) {
        ThermalParams step_params = params;
        step_params.dt = times[k] - times[k - 1];
        ThermalStepInfo info;
        state = thermal_step(state, rho_traj[k], u_traj[k], law, step_params, &info);
        state.t = times[k];
        slab.newton_iterations.push_back(info.iterations);
        record(state.g, k);

        const auto& th = slab.theta.back();
        const double cond = conduction_integrand(th, law);
        const double vel = velocity_weighted_integrand(u_traj[k], th);
        slab.apriori.conduction += 0.5 * step_params.dt * (prev_cond + cond);
        slab.apriori.velocity_weighted += 0.5 * step_params.dt * (prev_vel + vel);
        slab.apriori.sup_theta_gamma = std::max(slab.apriori.sup_theta_gamma, theta_gamma(th));
        prev_cond = cond;
        prev_vel = vel;
    }
    return slab;
}

ScalarField entropy_field(const ScalarField& g, const ScalarField& rho, const VirialLaw& law, double eps) {
    const ScalarField theta = theta_field(g, rho, law, eps);
    ScalarField out(g.grid());
    for (std::size_t c = 0; c < out.size(); ++c) out[c] = entropy_density(law, {rho[c], theta[c]}, eps);
    return out;
}

}  // namespace nsfv
