#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "nsfv/errors.hpp"
#include "nsfv/law_validator.hpp"

using namespace nsfv;

namespace {

const CheckResult& by_id(const std::vector<CheckResult>& checks, const std::string& id) {
    const auto it = std::find_if(checks.begin(), checks.end(), [&](const CheckResult& c) { return c.id == id; });
    REQUIRE(it != checks.end());
    return *it;
}

VirialLaw with_b0(CoefficientFn b0) {
    VirialLaw law = laws::reference();
    law.b[0] = std::move(b0);
    return law;
}

std::vector<std::string> structural_failures(const ValidationReport& r) {
    std::vector<std::string> out;
    const auto& ids = structural_check_ids();
    for (const auto& f : r.failures())
        if (std::find(ids.begin(), ids.end(), f) != ids.end()) out.push_back(f);
    return out;
}

}  // namespace

TEST_SUITE("law_validator") {

TEST_CASE("scan grid") {
    ScanGrid g;
    CHECK(g.thetas().size() == 128);
    CHECK(g.thetas().front() == doctest::Approx(1e-3));
    CHECK(g.rhos().back() == doctest::Approx(1e2));
    g.points = 4;
    CHECK_THROWS_AS(g.check(), ConfigError);
    g.points = 32;
    g.theta_lo = 2e3;
    CHECK_THROWS_AS(g.check(), ConfigError);
}

TEST_CASE("structure") {
    for (const auto& c : validate_structure(laws::reference(), 2)) CHECK_MESSAGE(c.status != CheckStatus::fail, c.id);

    VirialLaw law = laws::reference();
    law.gamma = 4.0;
    CHECK(by_id(validate_structure(law, 2), "gamma-floor").status == CheckStatus::fail);

    law = laws::reference();
    law.lambda = -1.2;
    const auto& lame = by_id(validate_structure(law, 2), "lame");
    CHECK(lame.status == CheckStatus::fail);
    CHECK(lame.margin == doctest::Approx(0.2));
    CHECK(by_id(validate_structure(law, 1), "lame").status == CheckStatus::pass);
}

TEST_CASE("radiative part") {
    const ScanGrid grid;
    const auto ref = check_radiative(laws::reference(), grid);
    CHECK(by_id(ref, "radiative-P2").status == CheckStatus::pass);
    CHECK(by_id(ref, "radiative-P3").status == CheckStatus::pass);
    CHECK(by_id(ref, "radiative-P3").fitted_c == doctest::Approx(1.0));

    const auto cubic = check_radiative(with_b0(CoefficientFn::power(1.0, 3.0)), grid);
    const auto& p3 = by_id(cubic, "radiative-P3");
    CHECK(p3.status == CheckStatus::fail);
    CHECK(p3.witness_theta < 0.01);

    CHECK(by_id(check_radiative(with_b0(CoefficientFn::constant(0.0)), grid), "radiative-P3").status == CheckStatus::fail);
}

TEST_CASE("concavity") {
    const ScanGrid grid;
    CHECK(by_id(check_concavity(laws::concave(), grid), "concavity-P5").status == CheckStatus::pass);
    CHECK(by_id(check_concavity(laws::constant_b2(), grid), "concavity-P5").status == CheckStatus::pass);
    const auto& bad = by_id(check_concavity(laws::nonconcave(), grid), "concavity-P5");
    CHECK(bad.status == CheckStatus::fail);
    CHECK(bad.witness_theta > 1.0);
    CHECK(bad.witness_theta < 3.0);
}

TEST_CASE("growth") {
    const ScanGrid grid;
    const auto ref = check_growth(laws::reference(), grid);
    CHECK(by_id(ref, "growth-P6").status == CheckStatus::pass);
    CHECK(by_id(ref, "growth-P6bis").status == CheckStatus::pass);
    CHECK(by_id(ref, "growth-P6-small").status == CheckStatus::informational);

    const auto cst = check_growth(laws::constant_b2(), grid);
    CHECK(by_id(cst, "growth-P6").status == CheckStatus::pass);
    const auto& bis = by_id(cst, "growth-P6bis");
    CHECK(bis.status == CheckStatus::fail);
    CHECK(bis.witness_theta >= 1.0);
}

TEST_CASE("specific heat and entropy concavity") {
    const ScanGrid grid;
    for (const auto& c : check_cv_and_entropy(laws::reference(), grid)) CHECK_MESSAGE(c.status == CheckStatus::pass, c.id);

    // B₂ = −θ/(1+θ²) scaled up: C_v turns negative at large ρ.
    VirialLaw law = laws::nonconcave();
    law.b[2] = CoefficientFn::rational_power(-5.0, 1.0, 1.0, 2.0);
    const auto& cv = by_id(check_cv_and_entropy(law, grid), "cv-positive");
    CHECK(cv.status == CheckStatus::fail);
    CHECK(cv.witness_rho > 1.0);
    CHECK(specific_heat(law, {cv.witness_rho, cv.witness_theta}) < 0.0);
}

TEST_CASE("phi gap") {
    const ScanGrid grid;
    const auto& ref = by_id(check_phi_gap(laws::reference(), grid), "phi-gap");
    CHECK(ref.status == CheckStatus::pass);
    CHECK(ref.fitted_c < 1.1);

    VirialLaw none = laws::reference();
    for (auto& b : none.b) b = CoefficientFn::constant(0.0);
    const auto& zero = by_id(check_phi_gap(none, grid), "phi-gap");
    CHECK(zero.status == CheckStatus::pass);
    CHECK(zero.fitted_c < 1e-10);

    VirialLaw off = laws::constant_b2(1.0);
    off.b_bar[2] = 1e6;
    const auto& mis = by_id(check_phi_gap(off, grid), "phi-gap");
    CHECK(mis.fitted_c > 1e6);
    CHECK(mis.status == CheckStatus::informational);
}

TEST_CASE("non-monotonicity") {
    const ScanGrid grid;
    CHECK_FALSE(detect_nonmonotone(laws::reference(), grid).has_value());
    VirialLaw baro = laws::reference();
    for (auto& b : baro.b) b = CoefficientFn::constant(0.0);
    CHECK_FALSE(detect_nonmonotone(baro, grid).has_value());

    const VirialLaw demo = laws::nonmonotone_demo();
    const auto w = detect_nonmonotone(demo, grid);
    REQUIRE(w.has_value());
    CHECK(pressure_drho(demo, *w) < -0.01);
    CHECK(pressure_drho(demo, *w) <= pressure_drho(demo, {0.1, 1.0}));
}

TEST_CASE("full reports") {
    const ValidationReport ref = validate_law(laws::reference(), 2);
    CHECK(ref.all_pass());
    CHECK_FALSE(ref.nonmonotone_witness.has_value());
    CHECK(ref.to_csv().rfind("check-id,status,witness_rho,witness_theta,margin,fitted_C\n", 0) == 0);
    CHECK(ref.to_text().find("growth-P6bis") != std::string::npos);
    CHECK_THROWS_AS((void)ref.find("no-such-check"), IndexOutOfRange);

    CHECK(validate_law(laws::constant_b2(), 2).failures() == std::vector<std::string>{"growth-P6bis"});
    CHECK(structural_failures(validate_law(laws::nonconcave(), 2)) == std::vector<std::string>{"concavity-P5"});

    const ValidationReport demo = validate_law(laws::nonmonotone_demo(), 1);
    CHECK(demo.nonmonotone_witness.has_value());
    CHECK(structural_failures(demo) == std::vector<std::string>{"concavity-P5"});
}

}  // TEST_SUITE
