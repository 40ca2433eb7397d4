#pragma once

#include <functional>
#include <vector>

#include "nsfv/fields.hpp"
#include "nsfv/statelaw.hpp"

namespace nsfv {

/// The good unknown g_ε and its regularization parameter. θ is always
/// recovered from (ρ, g) and never stored as a primary variable.
struct ThermalState {
    ScalarField g;
    double eps = 1e-3;
    double t = 0.0;
};

struct ThermalParams {
    /// Step length; zero means "use the cadence of the prescribed trajectory".
    double dt = 0.0;
    double newton_tol = 1e-10;
    int newton_max = 50;
    /// Drop the κ'(θ) terms from the Newton Jacobian.
    bool picard_lag = false;
    /// Optional forcing evaluated at the new time level (manufactured solutions).
    std::function<ScalarField(double t)> source;
};

/// Pointwise θ(ρ, g). Errors carry the failing cell index.
ScalarField theta_field(const ScalarField& g, const ScalarField& rho, const VirialLaw& law, double eps);

/// Backward-Euler residual of
///   ∂_t g + div(g u) + P̃_ε div u = S:∇u + div(κ(θ)∇θ)
/// with ρ and u sampled at the new time level.
ScalarField thermal_residual(const ScalarField& g_new, const ScalarField& g_old, const ScalarField& rho,
                             const VectorField& u, const VirialLaw& law, double eps, double dt,
                             const ScalarField* forcing = nullptr);

struct ThermalStepInfo {
    int iterations = 0;
    double final_residual = 0.0;
};

/// One backward-Euler step solved by Newton. Requires eps > 0.
ThermalState thermal_step(const ThermalState& state, const ScalarField& rho, const VectorField& u,
                          const VirialLaw& law, const ThermalParams& params, ThermalStepInfo* info = nullptr);

/// The functionals bounded a priori for the thermal step: sup_t ∫θ^{γ_θ},
/// ∫∫κ(θ)|∇θ|²/θ², ∫∫|∇u|²/θ (trapezoidal in time).
struct ThermalApriori {
    double sup_theta_gamma = 0.0;
    double conduction = 0.0;
    double velocity_weighted = 0.0;
};

struct ThermalSlab {
    std::vector<double> times;
    std::vector<ScalarField> g;
    std::vector<ScalarField> theta;
    std::vector<int> newton_iterations;
    ThermalApriori apriori;
};

/// Marches g from times[0] through every later sample time, using ρ and u
/// at the new time level of each step.
ThermalSlab solve_thermal_slab(const ScalarField& g0, const std::vector<double>& times,
                               const std::vector<ScalarField>& rho_traj, const std::vector<VectorField>& u_traj,
                               const VirialLaw& law, double eps, const ThermalParams& params = {});

/// Pointwise ρ·s_ε.
ScalarField entropy_field(const ScalarField& g, const ScalarField& rho, const VirialLaw& law, double eps);

/// ∫κ(θ)|∇θ|²/θ² and ∫|∇u|²/θ at one time level.
double conduction_integrand(const ScalarField& theta, const VirialLaw& law);
double velocity_weighted_integrand(const VectorField& u, const ScalarField& theta);

}  // namespace nsfv
