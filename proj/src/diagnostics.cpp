#include "nsfv/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "nsfv/errors.hpp"
#include "nsfv/thermal.hpp"

namespace nsfv {

const std::vector<double>& DiagnosticSeries::column(std::size_t i) const {
    const std::vector<double>* cols[] = {&times,
                                         &mass,
                                         &kinetic,
                                         &internal,
                                         &total_energy,
                                         &g_total,
                                         &entropy_total,
                                         &theta_gamma_norm,
                                         &conduction_dissipation,
                                         &velocity_dissipation_weighted,
                                         &phi_theta,
                                         &rho_gamma_a};
    if (i >= column_names.size()) throw IndexOutOfRange("diagnostic column out of range");
    return *cols[i];
}

namespace {

constexpr double kVacuum = 1e-10;

// ρe without dividing by ρ, so that vacuum cells stay finite.
double rho_e(const VirialLaw& law, double rho, double theta) {
    if (rho > kVacuum) return rho * internal_energy(law, {rho, theta});
    return law.b[0].scaled(theta, 1, 2.0);
}

double kinetic_density(const VectorField& m, const ScalarField& rho, std::size_t c) {
    double m2 = 0.0;
    for (int a = 0; a < m.dim(); ++a) m2 += m[a][c] * m[a][c];
    if (rho[c] > kVacuum) return m2 / (2.0 * rho[c]);
    if (m2 == 0.0) return 0.0;
    throw NonPhysicalState("momentum in a vacuum cell");
}

double integral_of(const ScalarField& rho, auto&& fn) {
    double acc = 0.0;
    for (std::size_t c = 0; c < rho.size(); ++c) acc += fn(c);
    return acc * rho.grid().cell_volume();
}

// Cumulative trapezoid of samples f over times.
std::vector<double> cumulative(const std::vector<double>& times, const std::vector<double>& f) {
    std::vector<double> out(f.size(), 0.0);
    for (std::size_t k = 1; k < f.size(); ++k) out[k] = out[k - 1] + 0.5 * (times[k] - times[k - 1]) * (f[k - 1] + f[k]);
    return out;
}

double grad_u_squared(const VectorField& u) {
    const TensorField du = gradient(u);
    double acc = 0.0;
    for (const auto& comp : du.comp)
        for (double v : comp.values()) acc += v * v;
    return acc * u.grid().cell_volume();
}

// ∫(S:∇u − P̃_ε div u) at one sample.
double g_source(const SlabTrajectory& traj, std::size_t k, const VirialLaw& law) {
    const auto& u = traj.u[k];
    const ScalarField heating = stress_contract(stress_tensor(u, law.mu, law.lambda), gradient(u));
    const ScalarField div = divergence(u);
    return integral_of(traj.rho[k], [&](std::size_t c) {
        return heating[c] - reduced_pressure(law, {traj.rho[k][c], traj.theta[k][c]}, traj.eps) * div[c];
    });
}

// ∫(1/θ)S:∇u + κ|∇θ|²/θ² at one sample, the conduction part in the face form
// Σ_f κ_f (θ_r − θ_c)²/(h² θ_c θ_r) that summation by parts produces from the
// thermal step's face-averaged diffusion.
double entropy_production(const SlabTrajectory& traj, std::size_t k, const VirialLaw& law) {
    const auto& u = traj.u[k];
    const auto& th = traj.theta[k];
    const auto& g = th.grid();
    const ScalarField heating = stress_contract(stress_tensor(u, law.mu, law.lambda), gradient(u));
    double faces = 0.0;
    for (std::size_t c = 0; c < th.size(); ++c)
        for (int a = 0; a < g.dim; ++a) {
            const std::size_t r = g.shift(c, a, 1);
            const double kf = 0.5 * (conductivity(law, th[c]) + conductivity(law, th[r]));
            const double jump = th[r] - th[c];
            faces += kf * jump * jump / (th[c] * th[r]);
        }
    return integral_of(th, [&](std::size_t c) { return heating[c] / th[c]; }) + faces * g.cell_volume() / (g.h() * g.h());
}

}  // namespace

double total_energy(const HydroState& hydro, const ScalarField& theta, const VirialLaw& law) {
    return integral_of(hydro.rho, [&](std::size_t c) {
        return kinetic_density(hydro.m, hydro.rho, c) + rho_e(law, hydro.rho[c], theta[c]);
    });
}

DiagnosticSeries compute_series(const SlabTrajectory& traj, const VirialLaw& law) {
    DiagnosticSeries s;
    s.times = traj.times;
    const int d = traj.grid().dim;
    const double a = 1.0 / (2.0 * d);
    std::vector<double> cond, velw, gradu2, theta_abar, rho_ga;
    for (std::size_t k = 0; k < traj.samples(); ++k) {
        const auto& rho = traj.rho[k];
        const auto& th = traj.theta[k];
        s.mass.push_back(integrate(rho));
        s.kinetic.push_back(integral_of(rho, [&](std::size_t c) { return kinetic_density(traj.m[k], rho, c); }));
        s.internal.push_back(integral_of(rho, [&](std::size_t c) { return rho_e(law, rho[c], th[c]); }));
        s.total_energy.push_back(s.kinetic.back() + s.internal.back());
        s.g_total.push_back(integrate(traj.g[k]));
        s.entropy_total.push_back(
            integral_of(rho, [&](std::size_t c) { return entropy_density(law, {rho[c], th[c]}, traj.eps); }));
        s.theta_gamma_norm.push_back(
            integral_of(rho, [&](std::size_t c) { return std::pow(th[c], law.gamma_theta); }));
        cond.push_back(conduction_integrand(th, law));
        velw.push_back(velocity_weighted_integrand(traj.u[k], th));
        gradu2.push_back(grad_u_squared(traj.u[k]));
        const double lab = integral_of(rho, [&](std::size_t c) { return std::pow(th[c], law.alpha_bar); });
        theta_abar.push_back(std::pow(lab, 2.0 / law.alpha_bar));
        rho_ga.push_back(integral_of(rho, [&](std::size_t c) { return std::pow(rho[c], law.gamma + a); }));
    }
    s.conduction_dissipation = cumulative(s.times, cond);
    s.velocity_dissipation_weighted = cumulative(s.times, velw);
    s.rho_gamma_a = cumulative(s.times, rho_ga);
    const auto gu = cumulative(s.times, gradu2);
    const auto tl = cumulative(s.times, theta_abar);
    for (std::size_t k = 0; k < s.times.size(); ++k)
        s.phi_theta.push_back(gu[k] + std::pow(tl[k], law.alpha_bar / 2.0));
    return s;
}

std::vector<double> energy_inequality_residual(const DiagnosticSeries& series) {
    std::vector<double> out;
    out.reserve(series.size());
    for (double e : series.total_energy) out.push_back(e - series.total_energy.front());
    return out;
}

std::vector<double> g_balance_residual(const DiagnosticSeries& series, const SlabTrajectory& traj,
                                       const VirialLaw& law) {
    std::vector<double> src;
    for (std::size_t k = 0; k < traj.samples(); ++k) src.push_back(g_source(traj, k, law));
    const auto acc = cumulative(traj.times, src);
    std::vector<double> out;
    for (std::size_t k = 0; k < traj.samples(); ++k)
        out.push_back(series.g_total[k] - series.g_total.front() - acc[k]);
    return out;
}

std::vector<double> entropy_inequality_residual(const SlabTrajectory& traj, const VirialLaw& law) {
    std::vector<double> total, prod;
    for (std::size_t k = 0; k < traj.samples(); ++k) {
        const auto& rho = traj.rho[k];
        const auto& th = traj.theta[k];
        for (double v : th.values())
            if (!(v > 0.0)) throw DomainError("entropy inequality requires theta > 0 on the trajectory");
        total.push_back(
            integral_of(rho, [&](std::size_t c) { return entropy_density(law, {rho[c], th[c]}, traj.eps); }));
        prod.push_back(entropy_production(traj, k, law));
    }
    std::vector<double> out;
    for (std::size_t k = 0; k + 1 < traj.samples(); ++k) {
        const double dt = traj.times[k + 1] - traj.times[k];
        out.push_back(total[k + 1] - total[k] - dt * prod[k + 1]);
    }
    return out;
}

AprioriReport apriori_functionals(const SlabTrajectory& traj, const VirialLaw& law) {
    const DiagnosticSeries s = compute_series(traj, law);
    AprioriReport r;
    r.sup_theta_gamma = *std::max_element(s.theta_gamma_norm.begin(), s.theta_gamma_norm.end());
    r.conduction = s.conduction_dissipation.back();
    r.velocity_weighted = s.velocity_dissipation_weighted.back();
    r.phi_theta_final = s.phi_theta.back();

    std::vector<double> lab;
    for (std::size_t k = 0; k < traj.samples(); ++k) {
        const auto& th = traj.theta[k];
        double acc = 0.0;
        for (double v : th.values()) acc += std::pow(v, law.alpha_bar);
        lab.push_back(std::pow(acc * th.grid().cell_volume(), 2.0 / law.alpha_bar));
    }
    const double span = traj.times.back() - traj.times.front();
    r.poincare_lhs = std::pow(cumulative(traj.times, lab).back(), law.alpha_bar / 2.0);
    r.poincare_sup_term = std::pow(span, law.alpha_bar / 2.0) *
                          std::pow(r.sup_theta_gamma, law.alpha_bar / law.gamma_theta);
    r.poincare_conduction_term = r.conduction;
    const double denom = r.poincare_sup_term + r.poincare_conduction_term;
    r.poincare_ratio = denom > 0.0 ? r.poincare_lhs / denom : 0.0;
    return r;
}

std::vector<double> rho_power_identity_residual(const SlabTrajectory& traj, int n) {
    if (n < 2) throw IndexOutOfRange("rho power identity needs n >= 2");
    std::vector<double> mass_n, src;
    for (std::size_t k = 0; k < traj.samples(); ++k) {
        const auto& rho = traj.rho[k];
        const ScalarField div = divergence(traj.u[k]);
        mass_n.push_back(integral_of(rho, [&](std::size_t c) { return std::pow(rho[c], n); }));
        src.push_back(integral_of(rho, [&](std::size_t c) { return std::pow(rho[c], n) * div[c]; }));
    }
    const auto acc = cumulative(traj.times, src);
    std::vector<double> out;
    for (std::size_t k = 0; k < traj.samples(); ++k) out.push_back(mass_n[k] - mass_n.front() + (n - 1) * acc[k]);
    return out;
}

InequalityVerdict check_inequalities(const SlabTrajectory& traj, const DiagnosticSeries& series,
                                     const VirialLaw& law, const InequalityTolerance& tol) {
    InequalityVerdict v;
    const auto energy = energy_inequality_residual(series);
    v.worst_energy_excess = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < energy.size(); ++k) {
        const double excess = energy[k] - tol(series.times[k] - series.times.front());
        v.worst_energy_excess = std::max(v.worst_energy_excess, excess);
    }
    v.energy_pass = v.worst_energy_excess <= 0.0;

    const auto entropy = entropy_inequality_residual(traj, law);
    v.worst_entropy_deficit = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < entropy.size(); ++k) {
        const double slack = entropy[k] + tol(traj.times[k + 1] - traj.times[k]);
        v.worst_entropy_deficit = std::min(v.worst_entropy_deficit, slack);
    }
    if (entropy.empty()) v.worst_entropy_deficit = 0.0;
    v.entropy_pass = v.worst_entropy_deficit >= 0.0;

    const auto gbal = g_balance_residual(series, traj, law);
    const double g0 = std::abs(series.g_total.front());
    double worst = 0.0;
    for (double r : gbal) worst = std::max(worst, std::abs(r));
    v.g_balance_relative = g0 > 0.0 ? worst / g0 : worst;
    v.g_balance_pass = v.g_balance_relative < 1e-3;
    return v;
}

}  // namespace nsfv
