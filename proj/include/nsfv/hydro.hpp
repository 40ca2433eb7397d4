#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "nsfv/fields.hpp"
#include "nsfv/statelaw.hpp"

namespace nsfv {

/// Density and momentum at one time level.
struct HydroState {
    ScalarField rho;
    VectorField m;
    double t = 0.0;
};

struct HydroTendency {
    ScalarField drho;
    VectorField dm;
};

struct HydroParams {
    double cfl = 0.4;
    double rho_floor_abort = 1e-10;
    /// Floor on ∂_ρP used for the CFL wavespeed where the law is non-monotone.
    double c2_floor = 1e-12;
    /// Optional forcing added to the tendencies (manufactured solutions).
    std::function<void(double t, HydroTendency&)> source;
};

/// Field samples at increasing times, linearly interpolated in between.
struct TimeSamples {
    std::vector<double> times;
    std::vector<ScalarField> fields;

    /// Field at time t; throws ConfigError when t lies outside the sampled range.
    [[nodiscard]] ScalarField at(double t) const;
};

/// u = m/ρ. Throws NonPhysicalState when ρ ≤ rho_floor_abort anywhere.
VectorField velocity(const HydroState& state, const HydroParams& params = {});

/// CFL-limited step: cfl·min h/(|u| + c), capped by the explicit viscous limit.
double stable_dt(const HydroState& state, const ScalarField& theta, const VirialLaw& law,
                 const HydroParams& params = {});

/// Number of cells where ∂_ρP < c2_floor (the sound speed was floored).
std::size_t sound_floor_count(const HydroState& state, const ScalarField& theta, const VirialLaw& law,
                              const HydroParams& params = {});

/// Continuity and momentum tendencies at frozen temperature.
HydroTendency hydro_rhs(const HydroState& state, const ScalarField& theta, const VirialLaw& law,
                        const HydroParams& params = {});

/// One SSP-RK2 step; `theta_next` is the temperature at t + dt.
HydroState hydro_step(const HydroState& state, const ScalarField& theta, const ScalarField& theta_next,
                      const VirialLaw& law, double dt, const HydroParams& params = {});

struct HydroSlab {
    std::vector<HydroState> states;  // one per output time, first is the initial state
    std::size_t steps = 0;
    std::size_t sound_floor_hits = 0;
};

/// Advances `initial` through every time in `theta_traj.times` (the first of
/// which must equal initial.t), with θ interpolated in time.
HydroSlab solve_hydro_slab(const HydroState& initial, const TimeSamples& theta_traj, const VirialLaw& law,
                           const HydroParams& params = {});

}  // namespace nsfv
