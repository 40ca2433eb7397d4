#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nsfv/errors.hpp"
#include "nsfv/statelaw.hpp"

using namespace nsfv;

namespace {

// Central differences in one variable with the other held fixed.
template <class F>
double d_rho(F f, ThermoPoint p, double h = 1e-5) {
    return (f({p.rho + h, p.theta}) - f({p.rho - h, p.theta})) / (2 * h);
}
template <class F>
double d_theta(F f, ThermoPoint p, double h = 1e-5) {
    return (f({p.rho, p.theta + h}) - f({p.rho, p.theta - h})) / (2 * h);
}

}  // namespace

TEST_SUITE("statelaw") {

TEST_CASE("coefficient evaluation") {
    const VirialLaw ref = laws::reference();
    CHECK(eval_B(ref, 0, 3.0, 0) == doctest::Approx(3.0));
    CHECK(eval_B(ref, 0, 3.0, 2) == 0.0);
    const VirialLaw demo = laws::nonmonotone_demo();
    CHECK(eval_B(demo, 2, 1.0, 0) == doctest::Approx(-0.25).epsilon(1e-14));

    // Rational-power derivatives against finite differences of the lower order.
    const CoefficientFn f = CoefficientFn::rational_power(-0.5, 0.2, 1.0, 1.2);
    for (double t : {0.3, 1.0, 4.0})
        for (int k = 1; k <= 3; ++k) {
            const double h = 1e-5 * t;
            const double fd = (f.derivative(t + h, k - 1) - f.derivative(t - h, k - 1)) / (2 * h);
            CHECK(f.derivative(t, k) == doctest::Approx(fd).epsilon(1e-6));
        }
}

TEST_CASE("coefficient text round trip") {
    const CoefficientFn f = CoefficientFn::sum(
        {CoefficientFn::constant(0.125), CoefficientFn::power(2.0, 1.5), CoefficientFn::rational_power(-0.5, 0.2, 1.0, 1.2)});
    const CoefficientFn g = parse_coefficient(f.to_string());
    for (double t : {0.0, 0.7, 3.0}) CHECK(g.derivative(t, 0) == f.derivative(t, 0));
    CHECK(parse_coefficient("2.5").derivative(7.0, 0) == 2.5);
    CHECK_THROWS_AS(parse_coefficient("power(1"), ConfigError);
    CHECK_THROWS_AS(parse_coefficient("cosh(1)"), ConfigError);
}

TEST_CASE("pressure and its derivatives") {
    const VirialLaw ref = laws::reference();
    CHECK(pressure(ref, {1, 1}) == doctest::Approx(2.0));
    CHECK(pressure(ref, {0, 0}) == 0.0);
    CHECK(pressure(laws::nonmonotone_demo(), {0, 0}) == 0.0);
    CHECK(pressure(ref, {2, 0}) == doctest::Approx(32.0));
    CHECK(pressure_drho(ref, {1, 1}) == doctest::Approx(5.0));
    CHECK(pressure_dtheta(ref, {1, 1}) == doctest::Approx(2.0));
    CHECK(pressure_drho(laws::nonmonotone_demo(), {0.1, 1}) == doctest::Approx(-0.0495).epsilon(1e-12));
}

TEST_CASE("internal energy and Maxwell relation") {
    const VirialLaw ref = laws::reference();
    CHECK(internal_energy(ref, {2, 1}) == doctest::Approx(4.5));
    CHECK(internal_energy(ref, {1, 0}) == doctest::Approx(0.25));
    CHECK_THROWS_AS(internal_energy(ref, {0, 1}), DomainError);

    for (const VirialLaw& law : {laws::reference(), laws::nonmonotone_demo(), laws::concave()}) {
        const ThermoPoint p{1.3, 0.7};
        const double P = pressure(law, p);
        const double de = d_rho([&](ThermoPoint q) { return internal_energy(law, q); }, p);
        const double dP = d_theta([&](ThermoPoint q) { return pressure(law, q); }, p);
        CHECK(std::abs(P - p.rho * p.rho * de - p.theta * dP) / (1 + std::abs(P)) < 1e-6);
    }
}

TEST_CASE("good unknown") {
    const VirialLaw ref = laws::reference();
    CHECK(good_unknown(ref, {3, 2}, 0.0) == doctest::Approx(4.0));
    CHECK(good_unknown(ref, {3, 2}, 0.1) == doctest::Approx(4.2));
    for (const VirialLaw& law : {laws::reference(), laws::nonmonotone_demo()}) CHECK(good_unknown(law, {2, 0}, 0.3) == 0.0);
    CHECK(dg_dtheta(ref, {7, 1}, 0.0) == doctest::Approx(2.0));
    CHECK(dg_dtheta(ref, {7, 1}, 0.5) == doctest::Approx(2.5));
}

TEST_CASE("dg_dtheta lower bound for a concave law") {
    // θ^{γ_θ−1}/C + ε ≤ ∂g/∂θ with the smallest C that works on the grid.
    const VirialLaw law = laws::concave();
    const double eps = 1e-3;
    double c = 0.0;
    for (int i = 0; i < 40; ++i)
        for (int j = 0; j < 40; ++j) {
            const double t = 0.01 * std::pow(1000.0, i / 39.0);
            const double r = 0.01 * std::pow(1000.0, j / 39.0);
            const double slack = dg_dtheta(law, {r, t}, eps) - eps;
            REQUIRE(slack > 0.0);
            c = std::max(c, std::pow(t, law.gamma_theta - 1) / slack);
        }
    CHECK(std::isfinite(c));
    CHECK(c < 1e3);
}

TEST_CASE("theta_of_g inversion") {
    const VirialLaw ref = laws::reference();
    CHECK(theta_of_g(ref, 5.0, 4.0, 0.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(theta_of_g(ref, 5.0, 0.0, 0.1) == 0.0);
    CHECK(theta_of_g(laws::nonmonotone_demo(), 0.5, 0.0, 0.0) == 0.0);
    CHECK(std::abs(theta_of_g(ref, 3.0, 4.2, 0.1) - 2.0) < 1e-10);
    CHECK_THROWS_AS(theta_of_g(ref, 1.0, -1.0, 0.0), NegativeInput);

    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> lg(-2.0, 2.0);
    // The demo law fails the C_v check, so g is not monotone in θ everywhere; use an admissible law.
    const VirialLaw law = laws::concave();
    for (int i = 0; i < 500; ++i) {
        const ThermoPoint p{std::pow(10.0, lg(rng)), std::pow(10.0, lg(rng))};
        const double eps = std::pow(10.0, -1.0 - lg(rng));
        const double g = good_unknown(law, p, eps);
        CHECK(std::abs(theta_of_g(law, p.rho, g, eps) - p.theta) <= 1e-10 * p.theta);
    }
}

TEST_CASE("dtheta_drho") {
    CHECK(dtheta_drho(laws::reference(), {2, 3}, 0.0) == 0.0);
    CHECK(dtheta_drho(laws::concave(), {2, 0}, 0.0) == 0.0);
    const VirialLaw law = laws::concave();
    const double g = good_unknown(law, {1, 1}, 0.0);
    const double h = 1e-5;
    const double fd = (theta_of_g(law, 1 + h, g, 0.0) - theta_of_g(law, 1 - h, g, 0.0)) / (2 * h);
    CHECK(std::abs(dtheta_drho(law, {1, 1}, 0.0) - fd) < 1e-6);
}

TEST_CASE("entropy and Gibbs relations") {
    const VirialLaw ref = laws::reference();
    CHECK(entropy(ref, {1, 1}) == doctest::Approx(2.0));
    CHECK(entropy(ref, {4, 1}) == doctest::Approx(0.5));
    CHECK(entropy_density(ref, {1, 1}, 0.1) == doctest::Approx(2.0));
    CHECK_THROWS_AS(entropy(ref, {1, 0}), DomainError);

    for (const VirialLaw& law : {laws::reference(), laws::nonmonotone_demo(), laws::concave()}) {
        const ThermoPoint p{1.3, 0.7};
        const auto s = [&](ThermoPoint q) { return entropy(law, q); };
        const auto e = [&](ThermoPoint q) { return internal_energy(law, q); };
        const auto P = [&](ThermoPoint q) { return pressure(law, q); };
        CHECK(std::abs(d_theta(s, p) - d_theta(e, p) / p.theta) < 1e-6);
        CHECK(std::abs(d_rho(s, p) + d_theta(P, p) / (p.rho * p.rho)) < 1e-6);
    }
}

TEST_CASE("reduced pressure") {
    const VirialLaw ref = laws::reference();
    CHECK(reduced_pressure(ref, {1, 1}, 0.0) == doctest::Approx(1.0));
    CHECK(reduced_pressure(ref, {1, 1}, 0.3) == doctest::Approx(1.0));
    const double e = std::numbers::e;
    CHECK(reduced_pressure(ref, {0, e}, 1.0) == doctest::Approx(-e + e * e).epsilon(1e-14));
    CHECK(reduced_pressure(ref, {1, 0}, 0.5) == 0.0);
    const VirialLaw demo = laws::nonmonotone_demo();
    for (double r : {0.1, 1.0, 3.0})
        CHECK(reduced_pressure(demo, {r, 0.8}, 0.0) == doctest::Approx(pressure(demo, {r, 0.8}) - std::pow(r, demo.gamma)));
}

TEST_CASE("specific heat") {
    const VirialLaw ref = laws::reference();
    CHECK(specific_heat(ref, {2, 3}) == doctest::Approx(3.0));
    CHECK(specific_heat(ref, {2, 0}) == 0.0);
    for (const VirialLaw& law : {laws::reference(), laws::nonmonotone_demo(), laws::concave()}) {
        const ThermoPoint p{1.3, 0.7};
        const double fd = d_theta([&](ThermoPoint q) { return internal_energy(law, q); }, p);
        CHECK(std::abs(specific_heat(law, p) - fd) < 1e-6);
    }
}

TEST_CASE("conductivity") {
    VirialLaw law = laws::reference();
    CHECK(conductivity(law, 0.0) == 1.0);
    CHECK(conductivity(law, 2.0) == doctest::Approx(17.0));
    CHECK(conductivity_dtheta(law, 2.0) == doctest::Approx(32.0));
    law.kappa_a = 0.5;
    law.kappa_b = 3.0;
    for (int i = 0; i < 64; ++i) {
        const double t = 1e-3 * std::pow(1e6, i / 63.0);
        const double ratio = conductivity(law, t) / (std::pow(t, 4) + 1);
        CHECK(ratio >= 0.5 - 1e-15);
        CHECK(ratio <= 3.0 + 1e-15);
    }
}

TEST_CASE("barotropic potential") {
    const VirialLaw ref = laws::reference();
    CHECK(phi_potential(ref, 2.0) == doctest::Approx(8.0));
    CHECK(p0_reference(ref, 2.0) == doctest::Approx(32.0));
    CHECK(p0_reference(ref, 0.0) == 0.0);

    VirialLaw law = laws::constant_b2(1.0);
    law.b_bar = {0.0, 0.0, 1.0};
    CHECK(p0_reference(law, 2.0) == doctest::Approx(36.0));
    // With B̄₀ ≠ 0 the constant enters φ once and P₀ once: P₀ − B̄₀ = ρφ′ − φ + B̄₀.
    law.b_bar = {0.25, 0.0, 1.0};
    CHECK(phi_potential(law, 0.0) == doctest::Approx(0.25));
    for (int i = 0; i < 20; ++i) {
        const double r = 0.1 + 0.2 * i;
        const double lhs = r * phi_potential_drho(law, r) - phi_potential(law, r) + law.b_bar[0];
        CHECK(lhs == doctest::Approx(p0_reference(law, r) - law.b_bar[0]).epsilon(1e-12));
    }
}

}  // TEST_SUITE
