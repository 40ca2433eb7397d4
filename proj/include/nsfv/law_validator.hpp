#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nsfv/statelaw.hpp"

namespace nsfv {

/// Rectangle in (ρ, θ) sampled on a tensor grid.
struct ScanGrid {
    enum class Spacing { log, linear };

    double theta_lo = 1e-3;
    double theta_hi = 1e3;
    double rho_lo = 1e-3;
    double rho_hi = 1e2;
    int points = 128;
    Spacing spacing = Spacing::log;

    /// Throws ConfigError unless 0 < lo < hi and points ≥ 16.
    void check() const;
    [[nodiscard]] std::vector<double> thetas() const;
    [[nodiscard]] std::vector<double> rhos() const;
};

struct ValidatorOptions {
    double theta_split = 1.0;
    double exponent_slack = 0.01;
};

enum class CheckStatus { pass, fail, informational };

const char* to_string(CheckStatus s);

/// One audited assumption. `margin > 0` means the tested inequality is
/// violated at the witness; `fitted_c` is NaN where no constant is fitted.
struct CheckResult {
    std::string id;
    CheckStatus status = CheckStatus::pass;
    double witness_rho = 0.0;
    double witness_theta = 0.0;
    double margin = 0.0;
    double fitted_c = 0.0;
    std::string note;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    std::optional<ThermoPoint> nonmonotone_witness;

    [[nodiscard]] const CheckResult& find(const std::string& id) const;
    /// Ids of failing checks, in report order.
    [[nodiscard]] std::vector<std::string> failures() const;
    [[nodiscard]] bool all_pass() const { return failures().empty(); }
    [[nodiscard]] std::string to_text() const;
    /// Columns: check-id,status,witness_rho,witness_theta,margin,fitted_C.
    [[nodiscard]] std::string to_csv() const;
};

/// Exponent and viscosity inequalities: gamma-floor, gamma-theta-range,
/// alpha-floor, alpha-bar, lame, conductivity, b1-constant.
std::vector<CheckResult> validate_structure(const VirialLaw& law, int dim);

/// radiative-P2 and radiative-P3.
std::vector<CheckResult> check_radiative(const VirialLaw& law, const ScanGrid& grid,
                                         const ValidatorOptions& opt = {});

/// concavity-P5: θ·d/dθ(θ²B_n') ≤ 0 for n ≥ 2.
std::vector<CheckResult> check_concavity(const VirialLaw& law, const ScanGrid& grid);

/// growth-P6 and growth-P6bis on θ ≥ θ_split, plus their small-θ
/// informational counterparts growth-P6-small and growth-P6bis-small.
std::vector<CheckResult> check_growth(const VirialLaw& law, const ScanGrid& grid, const ValidatorOptions& opt = {});

/// cv-positive, entropy-concavity-P7 and maxwell.
std::vector<CheckResult> check_cv_and_entropy(const VirialLaw& law, const ScanGrid& grid);

/// phi-gap with β₁ = γ/2, β₂ = α/2 − slack.
std::vector<CheckResult> check_phi_gap(const VirialLaw& law, const ScanGrid& grid, const ValidatorOptions& opt = {});

/// The scan point with the most negative ∂_ρP, if any is negative.
std::optional<ThermoPoint> detect_nonmonotone(const VirialLaw& law, const ScanGrid& grid);

ValidationReport validate_law(const VirialLaw& law, int dim, const ScanGrid& grid = {},
                              const ValidatorOptions& opt = {});

/// The check ids whose failure makes a law structurally inadmissible.
const std::vector<std::string>& structural_check_ids();

}  // namespace nsfv
