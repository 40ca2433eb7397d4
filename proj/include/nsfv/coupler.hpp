#pragma once

#include <string>
#include <vector>

#include "nsfv/fields.hpp"
#include "nsfv/hydro.hpp"
#include "nsfv/statelaw.hpp"
#include "nsfv/thermal.hpp"

namespace nsfv {

/// Sampled fields over one slab (or a concatenation of slabs).
struct SlabTrajectory {
    std::vector<double> times;
    std::vector<ScalarField> rho;
    std::vector<VectorField> m;
    std::vector<VectorField> u;
    std::vector<ScalarField> theta;
    std::vector<ScalarField> g;
    double eps = 0.0;

    [[nodiscard]] std::size_t samples() const noexcept { return times.size(); }
    [[nodiscard]] const PeriodicGrid& grid() const { return rho.front().grid(); }
    [[nodiscard]] HydroState hydro(std::size_t k) const { return {rho[k], m[k], times[k]}; }
};

struct FixedPointConfig {
    double omega = 0.5;
    double tol = 1e-6;
    int max_iter = 50;
    double slab_length = 0.1;
    /// Thermal steps (= trajectory samples − 1) per slab.
    int steps_per_slab = 20;
};

struct SlabReport {
    int iterations = 0;
    /// ‖L(θ_k) − θ_k‖/‖θ_k‖ per iteration.
    std::vector<double> residual_norms;
    /// ‖θ_{k+1} − θ_k‖/‖θ_k‖ per iteration (ω times the residual).
    std::vector<double> update_norms;
    bool converged = false;
};

struct RunReport {
    std::vector<SlabReport> slabs;
    std::string status = "not started";
    [[nodiscard]] std::string to_text() const;
};

/// Space-time L² over a slab: trapezoidal weights in time, h^d in space.
double slab_norm(const std::vector<double>& times, const std::vector<ScalarField>& f);
double slab_distance(const std::vector<double>& times, const std::vector<ScalarField>& a,
                     const std::vector<ScalarField>& b);

/// The map θ ↦ L(θ): hydro at prescribed θ, then the thermal solve driven by the
/// resulting (ρ, u). The returned trajectory's θ is L(θ).
SlabTrajectory apply_L(const TimeSamples& theta, const HydroState& hydro0, const ScalarField& g0,
                       const VirialLaw& law, double eps, const HydroParams& hydro_params = {},
                       const ThermalParams& thermal_params = {});

/// Damped Picard iteration θ_{k+1} = (1−ω)θ_k + ωL(θ_k) on [hydro0.t, hydro0.t + T],
/// seeded with the constant-in-time extension of θ(ρ0, g0). Throws ConvergenceFailure
/// carrying the residual history when max_iter is exhausted; `report` is filled either way.
SlabTrajectory fixed_point_solve(const HydroState& hydro0, const ScalarField& g0, const VirialLaw& law,
                                 const FixedPointConfig& config, double eps, SlabReport* report = nullptr,
                                 const HydroParams& hydro_params = {}, const ThermalParams& thermal_params = {});

/// Chains fixed-point slabs from hydro0.t to t_final; each slab starts from the
/// previous terminal (ρ, m, g). The last slab is shortened to land on t_final.
SlabTrajectory continue_slabs(const HydroState& hydro0, const ScalarField& g0, const VirialLaw& law,
                              const FixedPointConfig& config, double eps, double t_final,
                              RunReport* report = nullptr, const HydroParams& hydro_params = {},
                              const ThermalParams& thermal_params = {});

/// Initial good unknown for data given as (ρ0, θ0).
ScalarField initial_g(const ScalarField& rho0, const ScalarField& theta0, const VirialLaw& law, double eps);

}  // namespace nsfv
