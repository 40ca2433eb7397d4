#include "nsfv/statelaw.hpp"

#include <cmath>
#include <limits>
#include <locale>
#include <sstream>

#include "nsfv/errors.hpp"

namespace nsfv {

namespace {

double falling(double p, int j) {
    double r = 1.0;
    for (int i = 0; i < j; ++i) r *= (p - i);
    return r;
}

double binom(int k, int j) {
    static constexpr double table[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
    return table[k][j];
}

// coef · θ^e, continuous at θ = 0 where the exponent permits.
double power_term(double coef, double theta, double e) {
    if (coef == 0.0) return 0.0;
    if (theta > 0.0) return coef * std::pow(theta, e);
    if (theta < 0.0) throw DomainError("coefficient evaluated at negative temperature");
    if (e > 0.0) return 0.0;
    if (e == 0.0) return coef;
    throw DomainError("coefficient singular at theta = 0");
}

double ipow(double x, int n) {
    double r = 1.0;
    for (int i = 0; i < n; ++i) r *= x;
    return r;
}

}  // namespace

CoefficientFn CoefficientFn::constant(double a) {
    CoefficientFn f;
    f.kind_ = Kind::constant;
    f.a_ = a;
    return f;
}

CoefficientFn CoefficientFn::power(double a, double p) {
    CoefficientFn f;
    f.kind_ = Kind::power;
    f.a_ = a;
    f.p_ = p;
    return f;
}

CoefficientFn CoefficientFn::rational_power(double a, double p, double theta_s, double q) {
    if (!(theta_s > 0.0) || !(q > 0.0))
        throw ConfigError("rational coefficient needs theta_s > 0 and q > 0");
    CoefficientFn f;
    f.kind_ = Kind::rational_power;
    f.a_ = a;
    f.p_ = p;
    f.theta_s_ = theta_s;
    f.q_ = q;
    return f;
}

CoefficientFn CoefficientFn::sum(std::vector<CoefficientFn> terms) {
    CoefficientFn f;
    f.kind_ = Kind::sum;
    f.terms_ = std::move(terms);
    return f;
}

bool CoefficientFn::is_zero() const noexcept {
    if (kind_ != Kind::sum) return a_ == 0.0;
    for (const auto& t : terms_)
        if (!t.is_zero()) return false;
    return true;
}

double CoefficientFn::derivative(double theta, int order) const { return scaled(theta, order, 0.0); }

double CoefficientFn::scaled(double theta, int order, double s) const {
    if (order < 0 || order > 3) throw IndexOutOfRange("derivative order must be in 0..3");
    switch (kind_) {
        case Kind::constant:
            return order == 0 ? power_term(a_, theta, s) : 0.0;
        case Kind::power:
            return power_term(a_ * falling(p_, order), theta, p_ - order + s);
        case Kind::rational_power: {
            if (a_ == 0.0) return 0.0;
            if (theta < 0.0) throw DomainError("coefficient evaluated at negative temperature");
            // θ^i w^(i) with w = 1/(1+z), z = (θ/θ_s)^q, written through θ^j z^(j) = q(q-1)..·z.
            const double z = theta > 0.0 ? std::pow(theta / theta_s_, q_) : 0.0;
            const double d = 1.0 + z;
            const double h1 = -1.0 / (d * d), h2 = 2.0 / (d * d * d), h3 = -6.0 / (d * d * d * d);
            const double z1 = q_ * z, z2 = q_ * (q_ - 1.0) * z, z3 = q_ * (q_ - 1.0) * (q_ - 2.0) * z;
            const double w[4] = {1.0 / d, h1 * z1, h2 * z1 * z1 + h1 * z2,
                                 h3 * z1 * z1 * z1 + 3.0 * h2 * z1 * z2 + h1 * z3};
            double acc = 0.0;
            for (int j = 0; j <= order; ++j) acc += binom(order, j) * falling(p_, j) * w[order - j];
            return power_term(a_ * acc, theta, p_ - order + s);
        }
        case Kind::sum: {
            double acc = 0.0;
            for (const auto& t : terms_) acc += t.scaled(theta, order, s);
            return acc;
        }
    }
    return 0.0;
}

std::string CoefficientFn::to_string() const {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.precision(17);
    switch (kind_) {
        case Kind::constant: os << "constant(" << a_ << ")"; break;
        case Kind::power: os << "power(" << a_ << ", " << p_ << ")"; break;
        case Kind::rational_power:
            os << "rational(" << a_ << ", " << p_ << ", " << theta_s_ << ", " << q_ << ")";
            break;
        case Kind::sum:
            os << "sum(";
            for (std::size_t i = 0; i < terms_.size(); ++i) os << (i ? ", " : "") << terms_[i].to_string();
            os << ")";
            break;
    }
    return os.str();
}

void VirialLaw::check_shape() const {
    if (n_trunc < 0) throw ConfigError("n_trunc must be non-negative");
    const auto count = static_cast<std::size_t>(n_trunc) + 1;
    if (b.size() != count) throw ConfigError("law needs exactly n_trunc+1 coefficient functions");
    if (b_bar.size() != count) throw ConfigError("law needs exactly n_trunc+1 limits b_bar");
    if (n_trunc >= 1 && (b[1].kind() != CoefficientFn::Kind::constant || b[1].amplitude() != b1_constant))
        throw ConfigError("B_1 must be the constant b1_constant");
}

namespace laws {

VirialLaw reference() {
    VirialLaw law;
    law.b = {CoefficientFn::power(1.0, 1.0), CoefficientFn::constant(0.0), CoefficientFn::constant(0.0)};
    law.b_bar = {0.0, 0.0, 0.0};
    return law;
}

VirialLaw nonmonotone_demo() {
    VirialLaw law = reference();
    law.b[2] = CoefficientFn::rational_power(-0.5, 0.2, 1.0, 1.2);
    return law;
}

VirialLaw concave(double c, double p) {
    VirialLaw law = reference();
    law.b[2] = CoefficientFn::power(-c, p);
    return law;
}

VirialLaw constant_b2(double c) {
    VirialLaw law = reference();
    law.b[2] = CoefficientFn::constant(c);
    return law;
}

VirialLaw nonconcave() {
    VirialLaw law = reference();
    law.b[2] = CoefficientFn::rational_power(-1.0, 1.0, 1.0, 2.0);
    return law;
}

}  // namespace laws

namespace {

// θ^s B_n^(k)(θ)
double coef(const VirialLaw& law, int n, double theta, int k, double s) {
    return law.b[static_cast<std::size_t>(n)].scaled(theta, k, s);
}

void require_positive_rho(double rho, const char* what) {
    if (!(rho > 0.0)) throw DomainError(std::string(what) + " requires rho > 0");
}

// d/dθ(θ² B_n') = 2θB_n' + θ²B_n''
double d_theta2_dB(const VirialLaw& law, int n, double theta) {
    return 2.0 * coef(law, n, theta, 1, 1.0) + coef(law, n, theta, 2, 2.0);
}

}  // namespace

double eval_B(const VirialLaw& law, int n, double theta, int order) {
    if (n < 0 || n > law.n_trunc) throw IndexOutOfRange("coefficient index " + std::to_string(n) + " out of range");
    return law.b[static_cast<std::size_t>(n)].derivative(theta, order);
}

double pressure(const VirialLaw& law, ThermoPoint p) {
    double acc = std::pow(p.rho, law.gamma);
    for (int n = 0; n <= law.n_trunc; ++n) acc += coef(law, n, p.theta, 0, 1.0) * ipow(p.rho, n);
    return acc;
}

double pressure_drho(const VirialLaw& law, ThermoPoint p) {
    double acc = law.gamma * std::pow(p.rho, law.gamma - 1.0);
    for (int n = 1; n <= law.n_trunc; ++n) acc += n * coef(law, n, p.theta, 0, 1.0) * ipow(p.rho, n - 1);
    return acc;
}

double pressure_dtheta(const VirialLaw& law, ThermoPoint p) {
    double acc = 0.0;
    for (int n = 0; n <= law.n_trunc; ++n)
        acc += (coef(law, n, p.theta, 0, 0.0) + coef(law, n, p.theta, 1, 1.0)) * ipow(p.rho, n);
    return acc;
}

double reduced_energy(const VirialLaw& law, ThermoPoint p) {
    require_positive_rho(p.rho, "reduced_energy");
    double acc = coef(law, 0, p.theta, 1, 2.0) / p.rho;
    for (int n = 2; n <= law.n_trunc; ++n) acc -= coef(law, n, p.theta, 1, 2.0) * ipow(p.rho, n - 1) / (n - 1);
    return acc;
}

double internal_energy(const VirialLaw& law, ThermoPoint p) {
    require_positive_rho(p.rho, "internal_energy");
    return law.m_const + std::pow(p.rho, law.gamma - 1.0) / (law.gamma - 1.0) + reduced_energy(law, p);
}

double good_unknown(const VirialLaw& law, ThermoPoint p, double eps) {
    return p.rho * reduced_energy(law, p) + eps * p.theta;
}

double dg_dtheta(const VirialLaw& law, ThermoPoint p, double eps) {
    double acc = eps + d_theta2_dB(law, 0, p.theta);
    for (int n = 2; n <= law.n_trunc; ++n) acc -= d_theta2_dB(law, n, p.theta) * ipow(p.rho, n) / (n - 1);
    return acc;
}

double dg_drho(const VirialLaw& law, ThermoPoint p) {
    double acc = 0.0;
    for (int n = 2; n <= law.n_trunc; ++n)
        acc -= n * coef(law, n, p.theta, 1, 2.0) * ipow(p.rho, n - 1) / (n - 1);
    return acc;
}

double dtheta_drho(const VirialLaw& law, ThermoPoint p, double eps) {
    const double num = -dg_drho(law, p);
    if (num == 0.0) return 0.0;
    return num / dg_dtheta(law, p, eps);
}

double theta_of_g(const VirialLaw& law, double rho, double g, double eps) {
    require_positive_rho(rho, "theta_of_g");
    if (g < 0.0 || std::isnan(g)) throw NegativeInput("theta_of_g requires g >= 0");
    if (g == 0.0) return 0.0;
    auto residual = [&](double t) { return good_unknown(law, {rho, t}, eps) - g; };

    // Bracket [lo, hi] with G(lo) < g <= G(hi), stepping by factors of two from θ = 1.
    double lo = 0.0, hi = 1.0;
    constexpr int bracket_budget = 2200;
    int steps = 0;
    if (residual(hi) < 0.0) {
        lo = hi;
        while (true) {
            hi = 2.0 * lo;
            if (eps > 0.0 && hi > g / eps) hi = g / eps;  // g >= εθ
            if (residual(hi) >= 0.0) break;
            lo = hi;
            if (++steps > bracket_budget || !std::isfinite(hi))
                throw ConvergenceFailure("theta_of_g: no upper bracket (g not increasing in theta?)");
        }
    } else {
        while (hi > std::numeric_limits<double>::min()) {
            const double half = 0.5 * hi;
            if (residual(half) < 0.0) {
                lo = half;
                break;
            }
            hi = half;
            if (++steps > bracket_budget) break;
        }
    }

    double theta = hi;
    constexpr int newton_budget = 200;
    for (int it = 0; it < newton_budget; ++it) {
        const double f = residual(theta);
        if (f == 0.0) return theta;
        if (f < 0.0) lo = theta; else hi = theta;
        const double slope = dg_dtheta(law, {rho, theta}, eps);
        double next = theta - f / slope;
        if (!(slope > 0.0) || !(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - theta) <= 1e-15 * next || hi - lo <= 1e-15 * hi) return next;
        theta = next;
    }
    throw ConvergenceFailure("theta_of_g: iteration budget exhausted");
}

double entropy_density(const VirialLaw& law, ThermoPoint p, double eps) {
    require_positive_rho(p.rho, "entropy");
    if (!(p.theta > 0.0)) throw DomainError("entropy requires theta > 0");
    // B̃_n = θB_n' + B_n
    auto tilde = [&](int n) { return coef(law, n, p.theta, 1, 1.0) + coef(law, n, p.theta, 0, 0.0); };
    double acc = tilde(0);
    for (int n = 2; n <= law.n_trunc; ++n) acc -= tilde(n) * ipow(p.rho, n) / (n - 1);
    if (law.n_trunc >= 1 && law.b1_constant != 0.0) acc -= law.b1_constant * p.rho * std::log(p.rho);
    return acc + eps * std::log(p.theta);
}

double entropy(const VirialLaw& law, ThermoPoint p) { return entropy_density(law, p, 0.0) / p.rho; }

double reduced_pressure(const VirialLaw& law, ThermoPoint p, double eps) {
    double acc = (eps != 0.0 && p.theta > 0.0) ? -eps * p.theta * std::log(p.theta) : 0.0;
    for (int n = 0; n <= law.n_trunc; ++n) acc += coef(law, n, p.theta, 0, 1.0) * ipow(p.rho, n);
    return acc;
}

double reduced_pressure_dtheta(const VirialLaw& law, ThermoPoint p, double eps) {
    double acc = 0.0;
    if (eps != 0.0) {
        if (!(p.theta > 0.0)) throw DomainError("reduced_pressure_dtheta requires theta > 0 when eps > 0");
        acc = -eps * (std::log(p.theta) + 1.0);
    }
    return acc + pressure_dtheta(law, p);
}

double specific_heat(const VirialLaw& law, ThermoPoint p) {
    require_positive_rho(p.rho, "specific_heat");
    return dg_dtheta(law, p, 0.0) / p.rho;
}

double conductivity(const VirialLaw& law, double theta) {
    return law.kappa_a * std::pow(theta, law.alpha) + law.kappa_b;
}

double conductivity_dtheta(const VirialLaw& law, double theta) {
    return law.alpha * law.kappa_a * std::pow(theta, law.alpha - 1.0);
}

double phi_potential(const VirialLaw& law, double rho) {
    double acc = std::pow(rho, law.gamma) / (law.gamma - 1.0) + law.b_bar[0];
    for (int n = 2; n <= law.n_trunc; ++n) acc += law.b_bar[static_cast<std::size_t>(n)] * ipow(rho, n) / (n - 1);
    return acc;
}

double phi_potential_drho(const VirialLaw& law, double rho) {
    double acc = law.gamma * std::pow(rho, law.gamma - 1.0) / (law.gamma - 1.0);
    for (int n = 2; n <= law.n_trunc; ++n)
        acc += n * law.b_bar[static_cast<std::size_t>(n)] * ipow(rho, n - 1) / (n - 1);
    return acc;
}

double p0_reference(const VirialLaw& law, double rho) {
    double acc = std::pow(rho, law.gamma);
    for (int n = 0; n <= law.n_trunc; ++n) acc += law.b_bar[static_cast<std::size_t>(n)] * ipow(rho, n);
    return acc;
}

}  // namespace nsfv
