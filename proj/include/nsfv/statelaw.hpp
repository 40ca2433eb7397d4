#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace nsfv {

/// A virial coefficient B(θ) drawn from a small closed family:
///
///   constant        a
///   power           a·θ^p
///   rational-power  a·θ^p / (1 + (θ/θ_s)^q)
///   sum             finite sum of the above
///
/// Derivatives up to third order are exact. `scaled(θ, k, s)` returns
/// θ^s·B^(k)(θ) and extends continuously to θ = 0 whenever the combined
/// exponent allows it, which is how the state law evaluates products such
/// as θ²B'(θ) at zero temperature.
class CoefficientFn {
public:
    enum class Kind { constant, power, rational_power, sum };

    static CoefficientFn constant(double a);
    static CoefficientFn power(double a, double p);
    static CoefficientFn rational_power(double a, double p, double theta_s, double q);
    static CoefficientFn sum(std::vector<CoefficientFn> terms);

    [[nodiscard]] Kind kind() const noexcept { return kind_; }
    [[nodiscard]] double amplitude() const noexcept { return a_; }
    [[nodiscard]] double exponent() const noexcept { return p_; }
    [[nodiscard]] double saturation() const noexcept { return theta_s_; }
    [[nodiscard]] double saturation_exponent() const noexcept { return q_; }
    [[nodiscard]] const std::vector<CoefficientFn>& terms() const noexcept { return terms_; }

    /// d^order B / dθ^order at θ, order in 0..3.
    [[nodiscard]] double derivative(double theta, int order) const;
    /// θ^s · B^(order)(θ).
    [[nodiscard]] double scaled(double theta, int order, double s) const;

    /// True when the function is identically zero (all amplitudes vanish).
    [[nodiscard]] bool is_zero() const noexcept;

    /// Textual form accepted by `parse_coefficient`, e.g. "rational(-0.5, 0.2, 1, 1.2)".
    [[nodiscard]] std::string to_string() const;

private:
    Kind kind_ = Kind::constant;
    double a_ = 0.0;
    double p_ = 0.0;
    double theta_s_ = 1.0;
    double q_ = 1.0;
    std::vector<CoefficientFn> terms_;
};

/// Parses the textual form produced by CoefficientFn::to_string:
/// `constant(a)`, `power(a, p)`, `rational(a, p, theta_s, q)`,
/// `sum(term, term, ...)`. Throws ConfigError on malformed input.
CoefficientFn parse_coefficient(const std::string& text);

/// The complete equation-of-state record. Immutable by convention once
/// built; every evaluation below is a pure function of it.
struct VirialLaw {
    double gamma = 5.0;
    double gamma_theta = 2.0;
    double alpha = 4.0;
    double alpha_bar = 3.0;
    int n_trunc = 2;
    std::vector<CoefficientFn> b;  // B_0 .. B_N
    std::vector<double> b_bar;     // limits used by φ and P_0
    double b1_constant = 0.0;
    double mu = 1.0;
    double lambda = 0.0;
    double kappa_a = 1.0;
    double kappa_b = 1.0;
    double m_const = 0.0;

    /// Shape checks needed to evaluate anything at all: coefficient counts
    /// and B_1 being the constant b1_constant. Throws ConfigError.
    void check_shape() const;
};

namespace laws {

/// γ=5, N=2, B₀=θ, B₁=B₂=0, γ_θ=2, α=4, ᾱ=3, μ=1, λ=0, κ=θ⁴+1.
VirialLaw reference();
/// Reference law with B₂(θ) = −½·θ^{1/5}/(1+θ^{6/5}); non-monotone in ρ.
VirialLaw nonmonotone_demo();
/// Reference law with B₂(θ) = −c·θ^p (concave in the sense d/dθ(θ²B₂') ≤ 0).
VirialLaw concave(double c = 0.1, double p = 0.5);
/// Reference law with B₂ ≡ c.
VirialLaw constant_b2(double c = 1.0);
/// Reference law with B₂(θ) = −θ/(1+θ²).
VirialLaw nonconcave();

}  // namespace laws

struct ThermoPoint {
    double rho = 0.0;
    double theta = 0.0;
};

double eval_B(const VirialLaw& law, int n, double theta, int order);

double pressure(const VirialLaw& law, ThermoPoint p);
double pressure_drho(const VirialLaw& law, ThermoPoint p);
double pressure_dtheta(const VirialLaw& law, ThermoPoint p);

/// Specific internal energy e(ρ, θ). Requires ρ > 0.
double internal_energy(const VirialLaw& law, ThermoPoint p);
/// Non-barotropic part ẽ of the specific energy. Requires ρ > 0.
double reduced_energy(const VirialLaw& law, ThermoPoint p);
/// g = ρ·ẽ + ε·θ.
double good_unknown(const VirialLaw& law, ThermoPoint p, double eps);
/// ∂g/∂θ at fixed ρ.
double dg_dtheta(const VirialLaw& law, ThermoPoint p, double eps);
/// ∂g/∂ρ at fixed θ.
double dg_drho(const VirialLaw& law, ThermoPoint p);
/// The unique θ ≥ 0 with good_unknown(ρ, θ, ε) = g.
double theta_of_g(const VirialLaw& law, double rho, double g, double eps);
/// ∂θ/∂ρ at fixed g.
double dtheta_drho(const VirialLaw& law, ThermoPoint p, double eps);

/// Specific entropy s (integration constants zero). Requires ρ, θ > 0.
double entropy(const VirialLaw& law, ThermoPoint p);
/// ρ·s_ε = ρ·s + ε·log θ, the regularized entropy density.
double entropy_density(const VirialLaw& law, ThermoPoint p, double eps);

/// P̃_ε = −εθ log θ + θ Σ B_n ρ^n  (ε term extended by 0 at θ = 0).
double reduced_pressure(const VirialLaw& law, ThermoPoint p, double eps);
/// ∂P̃_ε/∂θ at fixed ρ. Requires θ > 0 when ε > 0.
double reduced_pressure_dtheta(const VirialLaw& law, ThermoPoint p, double eps);

double specific_heat(const VirialLaw& law, ThermoPoint p);

double conductivity(const VirialLaw& law, double theta);
double conductivity_dtheta(const VirialLaw& law, double theta);

/// φ(ρ) = ρ^γ/(γ−1) + Σ_{2≤n≤N} B̄_n ρ^n/(n−1) + B̄_0.
double phi_potential(const VirialLaw& law, double rho);
double phi_potential_drho(const VirialLaw& law, double rho);
/// P_0(ρ) = ρ^γ + Σ_n B̄_n ρ^n.
double p0_reference(const VirialLaw& law, double rho);

}  // namespace nsfv
