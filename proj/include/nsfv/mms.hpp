#pragma once

#include <string>
#include <vector>

#include "nsfv/statelaw.hpp"

namespace nsfv {

/// One row of a refinement table. `order` is log2 of the error ratio to the
/// previous row (NaN on the first row).
struct MmsRow {
    int n = 0;
    double dt = 0.0;
    double error = 0.0;
    double order = 0.0;
};

/// Thermal manufactured solution on the 1D unit torus with ρ = 1, u = 0:
///   θ*(x, t) = 1 + a·sin(2πx)·e^{−t}.
/// Spatial study: dt = dt_factor·h² so the temporal error shares the h² rate.
/// Error is the discrete L² norm of θ − θ* at t_final.
std::vector<MmsRow> thermal_mms_space(const VirialLaw& law, const std::vector<int>& resolutions, double t_final,
                                      double eps, double amplitude = 0.5, double dt_factor = 0.25);

/// Temporal study at fixed n against a reference solve with the finest step
/// divided by 16, so the spatial error cancels.
std::vector<MmsRow> thermal_mms_time(const VirialLaw& law, int n, const std::vector<int>& steps, double t_final,
                                     double eps, double amplitude = 0.5);

/// Hydro manufactured solution at frozen θ = 1 on the 1D unit torus:
///   ρ* = 1 + a·sin(2π(x−t)),  u* = 0.5 + (a/2)·sin(2π(x−t)).
/// Error is the discrete L¹ norm of ρ − ρ* at t_final.
std::vector<MmsRow> hydro_mms(const VirialLaw& law, const std::vector<int>& resolutions, double t_final,
                              double amplitude = 0.2);

/// "n,dt,error,order" table.
std::string mms_csv(const std::vector<MmsRow>& rows);

}  // namespace nsfv
