#pragma once

#include <array>
#include <string_view>
#include <vector>

#include "nsfv/coupler.hpp"
#include "nsfv/hydro.hpp"
#include "nsfv/statelaw.hpp"

namespace nsfv {

/// Time series over a trajectory. Cumulative columns integrate from the
/// first sample with the trapezoidal rule.
struct DiagnosticSeries {
    std::vector<double> times;
    std::vector<double> mass;
    std::vector<double> kinetic;
    std::vector<double> internal;
    std::vector<double> total_energy;
    std::vector<double> g_total;
    std::vector<double> entropy_total;
    std::vector<double> theta_gamma_norm;
    std::vector<double> conduction_dissipation;
    std::vector<double> velocity_dissipation_weighted;
    std::vector<double> phi_theta;
    std::vector<double> rho_gamma_a;

    static constexpr std::array<std::string_view, 12> column_names{
        "time",          "mass",           "kinetic",          "internal",
        "total_energy",  "g_total",        "entropy_total",    "theta_gamma_norm",
        "conduction_dissipation", "velocity_dissipation_weighted", "phi_theta", "rho_gamma_a"};

    /// Column by position in `column_names`.
    [[nodiscard]] const std::vector<double>& column(std::size_t i) const;
    [[nodiscard]] std::size_t size() const noexcept { return times.size(); }
};

/// 𝓔 = ∫ |m|²/2ρ + ρ e(ρ, θ).
double total_energy(const HydroState& hydro, const ScalarField& theta, const VirialLaw& law);

DiagnosticSeries compute_series(const SlabTrajectory& traj, const VirialLaw& law);

/// Discretization-aware tolerance tol(Δt) = c_tol·(dt + h²)·Δt.
struct InequalityTolerance {
    double c_tol = 1.0;
    double dt = 0.0;
    double h = 0.0;
    [[nodiscard]] double operator()(double span) const { return c_tol * (dt + h * h) * span; }
};

/// Calibrated constant used by the run command and the acceptance suite.
inline constexpr double kDefaultCTol = 1.0;

/// 𝓔(t) − 𝓔(0) per sample.
std::vector<double> energy_inequality_residual(const DiagnosticSeries& series);

/// ∫g(t) − ∫g(0) − ∫_0^t ∫(S:∇u − P̃_ε div u) per sample.
std::vector<double> g_balance_residual(const DiagnosticSeries& series, const SlabTrajectory& traj,
                                       const VirialLaw& law);

/// Per interval [t_k, t_{k+1}]: Δ∫ρs_ε − ∫∫[(1/θ)S:∇u + κ|∇θ|²/θ²], the production
/// taken at t_{k+1} as in the backward-Euler thermal step.
std::vector<double> entropy_inequality_residual(const SlabTrajectory& traj, const VirialLaw& law);

struct AprioriReport {
    double sup_theta_gamma = 0.0;
    double conduction = 0.0;
    double velocity_weighted = 0.0;
    double phi_theta_final = 0.0;
    /// ‖θ‖^ᾱ in L²(0,T; L^ᾱ) against the two terms of the Poincaré bound (β = 1).
    double poincare_lhs = 0.0;
    double poincare_sup_term = 0.0;
    double poincare_conduction_term = 0.0;
    double poincare_ratio = 0.0;
};

AprioriReport apriori_functionals(const SlabTrajectory& traj, const VirialLaw& law);

/// ∫ρ^n(t) − ∫ρ_0^n + (n−1)∫_0^t∫ρ^n div u per sample.
std::vector<double> rho_power_identity_residual(const SlabTrajectory& traj, int n);

struct InequalityVerdict {
    bool energy_pass = true;
    bool entropy_pass = true;
    bool g_balance_pass = true;
    double worst_energy_excess = 0.0;      // max of residual − tol (≤ 0 when passing)
    double worst_entropy_deficit = 0.0;    // min of residual + tol (≥ 0 when passing)
    double g_balance_relative = 0.0;       // max |residual| / ∫g(0)
    [[nodiscard]] bool all_pass() const noexcept { return energy_pass && entropy_pass && g_balance_pass; }
};

/// Applies the three inequality checks with tolerance `tol` (g-balance relative bound 1e−3).
InequalityVerdict check_inequalities(const SlabTrajectory& traj, const DiagnosticSeries& series,
                                     const VirialLaw& law, const InequalityTolerance& tol);

}  // namespace nsfv
