#include "nsfv/law_validator.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "nsfv/errors.hpp"

namespace nsfv {

namespace {

constexpr double kMaxConstant = 1e6;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> axis(double lo, double hi, int count, ScanGrid::Spacing spacing) {
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double t = static_cast<double>(i) / (count - 1);
        out[static_cast<std::size_t>(i)] = spacing == ScanGrid::Spacing::log
                                               ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)))
                                               : lo + t * (hi - lo);
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

CheckResult make(std::string id, bool ok, double rho, double theta, double margin, double c = kNaN,
                 std::string note = {}) {
    return {std::move(id), ok ? CheckStatus::pass : CheckStatus::fail, rho, theta, margin, c, std::move(note)};
}

// Exponent check: pass when `value` > `bound` (strict) or ≥ (non-strict).
CheckResult exponent_check(std::string id, bool ok, double margin, std::string note) {
    return make(std::move(id), ok, 0.0, 0.0, margin, kNaN, std::move(note));
}

std::string fmt(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

// Fit of LHS(θ) ≤ C θ^e over a θ-range, plus the log-log slope of LHS over
// the top decade of the range (or the whole range when it is shorter).
struct GrowthFit {
    double c = 0.0;
    double witness = 0.0;
    double slope = -std::numeric_limits<double>::infinity();
    bool finite = true;
};

template <class Lhs>
GrowthFit fit_growth(const std::vector<double>& thetas, double exponent, Lhs&& lhs) {
    GrowthFit fit;
    if (thetas.empty()) return fit;
    for (double th : thetas) {
        const double l = lhs(th);
        if (!std::isfinite(l)) {
            fit.finite = false;
            fit.witness = th;
            fit.c = std::numeric_limits<double>::infinity();
            return fit;
        }
        const double ratio = l / std::pow(th, exponent);
        if (ratio > fit.c) {
            fit.c = ratio;
            fit.witness = th;
        }
    }
    const double hi = thetas.back();
    const double lo = std::max(thetas.front(), hi / 10.0);
    if (hi > lo) {
        const double a = lhs(lo);
        const double b = lhs(hi);
        if (a > 0.0 && b > 0.0) fit.slope = std::log(b / a) / std::log(hi / lo);
        else if (a == 0.0 && b > 0.0) fit.slope = std::numeric_limits<double>::infinity();
    }
    return fit;
}

double abs_scaled(const CoefficientFn& f, double theta, int k, double s) { return std::abs(f.scaled(theta, k, s)); }

}  // namespace

void ScanGrid::check() const {
    if (!(theta_lo > 0.0 && theta_lo < theta_hi)) throw ConfigError("scan grid needs 0 < theta_lo < theta_hi");
    if (!(rho_lo > 0.0 && rho_lo < rho_hi)) throw ConfigError("scan grid needs 0 < rho_lo < rho_hi");
    if (points < 16) throw ConfigError("scan grid needs at least 16 points per axis");
}

std::vector<double> ScanGrid::thetas() const {
    check();
    return axis(theta_lo, theta_hi, points, spacing);
}

std::vector<double> ScanGrid::rhos() const {
    check();
    return axis(rho_lo, rho_hi, points, spacing);
}

const char* to_string(CheckStatus s) {
    switch (s) {
        case CheckStatus::pass: return "pass";
        case CheckStatus::fail: return "fail";
        case CheckStatus::informational: return "informational";
    }
    return "?";
}

const CheckResult& ValidationReport::find(const std::string& id) const {
    for (const auto& c : checks)
        if (c.id == id) return c;
    throw IndexOutOfRange("no check named " + id);
}

std::vector<std::string> ValidationReport::failures() const {
    std::vector<std::string> out;
    for (const auto& c : checks)
        if (c.status == CheckStatus::fail) out.push_back(c.id);
    return out;
}

std::string ValidationReport::to_text() const {
    std::ostringstream os;
    for (const auto& c : checks) {
        os << c.id << ": " << to_string(c.status);
        if (c.status != CheckStatus::pass) os << " at (rho=" << fmt(c.witness_rho) << ", theta=" << fmt(c.witness_theta) << ")";
        os << " margin=" << fmt(c.margin);
        if (!std::isnan(c.fitted_c)) os << " C=" << fmt(c.fitted_c);
        if (!c.note.empty()) os << "  [" << c.note << "]";
        os << "\n";
    }
    if (nonmonotone_witness)
        os << "non-monotone: dP/drho < 0 at (rho=" << fmt(nonmonotone_witness->rho)
           << ", theta=" << fmt(nonmonotone_witness->theta) << ")\n";
    else
        os << "non-monotone: no witness on the scan grid\n";
    return os.str();
}

std::string ValidationReport::to_csv() const {
    std::string out = "check-id,status,witness_rho,witness_theta,margin,fitted_C\n";
    for (const auto& c : checks) {
        out += c.id + "," + to_string(c.status) + "," + fmt(c.witness_rho) + "," + fmt(c.witness_theta) + "," +
               fmt(c.margin) + "," + (std::isnan(c.fitted_c) ? std::string() : fmt(c.fitted_c)) + "\n";
    }
    return out;
}

const std::vector<std::string>& structural_check_ids() {
    static const std::vector<std::string> ids{"gamma-floor",   "gamma-theta-range", "alpha-floor",  "alpha-bar",
                                              "lame",          "conductivity",      "b1-constant",  "radiative-P2",
                                              "radiative-P3",  "concavity-P5",      "growth-P6",    "growth-P6bis"};
    return ids;
}

std::vector<CheckResult> validate_structure(const VirialLaw& law, int dim) {
    std::vector<CheckResult> out;
    const double floor = std::max({4.0, 2.0 * law.n_trunc, static_cast<double>(dim)});
    out.push_back(exponent_check("gamma-floor", law.gamma > floor, floor - law.gamma,
                                 "gamma > max(4, 2N, d) = " + fmt(floor)));
    const bool gt = law.gamma_theta >= 2.0 && law.gamma_theta <= law.alpha / 2.0;
    out.push_back(exponent_check("gamma-theta-range", gt,
                                 std::max(2.0 - law.gamma_theta, law.gamma_theta - law.alpha / 2.0),
                                 "2 <= gamma_theta <= alpha/2"));
    out.push_back(exponent_check("alpha-floor", law.alpha >= 4.0, 4.0 - law.alpha, "alpha >= 4"));
    const double abar_cap = std::min(law.alpha, 2.0 * law.gamma_theta);
    out.push_back(exponent_check("alpha-bar", law.alpha_bar < abar_cap, law.alpha_bar - abar_cap,
                                 "alpha_bar < min(alpha, 2 gamma_theta)"));
    const double lame = std::min(law.mu, law.lambda + 2.0 * law.mu / dim);
    out.push_back(exponent_check("lame", law.mu > 0.0 && law.lambda + 2.0 * law.mu / dim > 0.0, -lame,
                                 "mu > 0 and lambda + 2 mu/d > 0"));
    out.push_back(exponent_check("conductivity", law.kappa_a > 0.0 && law.kappa_b >= 1.0,
                                 std::max(-law.kappa_a, 1.0 - law.kappa_b), "kappa_a > 0, kappa_b >= 1"));
    bool b1_ok = law.b.size() > 1 && law.b[1].kind() == CoefficientFn::Kind::constant &&
                 law.b[1].amplitude() == law.b1_constant;
    if (law.b.size() > 1 && law.b[1].is_zero() && law.b1_constant == 0.0) b1_ok = true;
    out.push_back(exponent_check("b1-constant", b1_ok, b1_ok ? 0.0 : 1.0, "B_1 constant"));
    return out;
}

std::vector<CheckResult> check_radiative(const VirialLaw& law, const ScanGrid& grid, const ValidatorOptions& opt) {
    const auto th = grid.thetas();
    const CoefficientFn& b0 = law.b.at(0);
    std::vector<CheckResult> out;

    // (P2): ∂²_θ(θB₀) = 2B₀' + θB₀'' > 0 on the smallest scan temperatures.
    {
        double worst = std::numeric_limits<double>::infinity();
        double at = th.front();
        bool finite = true;
        for (std::size_t i = 0; i < 8 && i < th.size(); ++i) {
            const double v = 2.0 * b0.derivative(th[i], 1) + b0.scaled(th[i], 2, 1.0);
            if (!std::isfinite(v)) finite = false;
            if (v < worst) {
                worst = v;
                at = th[i];
            }
        }
        if (!finite)
            out.push_back({"radiative-P2", CheckStatus::informational, 1.0, at, kNaN, kNaN,
                           "second derivative undefined near 0"});
        else
            out.push_back(make("radiative-P2", worst > 0.0, 1.0, at, -worst, kNaN, "d2/dtheta2 (theta B0) > 0 near 0"));
    }

    // (P3): C⁻¹θ^{γ_θ−1} ≤ B₀ ≤ Cθ^{γ_θ−1}. The fitted C must be moderate and the
    // end slopes of log B₀ must match γ_θ−1, otherwise the ratio diverges off-grid.
    {
        const double e = law.gamma_theta - 1.0;
        double c = 1.0;
        double at = th.front();
        bool positive = true;
        for (double t : th) {
            const double b = b0.derivative(t, 0);
            if (!(b > 0.0)) {
                positive = false;
                at = t;
                break;
            }
            const double r = std::max(b / std::pow(t, e), std::pow(t, e) / b);
            if (r > c) {
                c = r;
                at = t;
            }
        }
        if (!positive) {
            out.push_back(make("radiative-P3", false, 1.0, at, 1.0, std::numeric_limits<double>::infinity(),
                               "B0 not positive"));
        } else {
            auto slope = [&](double lo, double hi) {
                return std::log(b0.derivative(hi, 0) / b0.derivative(lo, 0)) / std::log(hi / lo);
            };
            const double s_small = slope(th.front(), std::min(th.back(), th.front() * 10.0));
            const double s_large = slope(std::max(th.front(), th.back() / 10.0), th.back());
            const double tol = opt.exponent_slack;
            double margin = std::log10(c / kMaxConstant);
            double wit = at;
            if (std::abs(s_small - e) > tol) {
                margin = std::max(margin, std::abs(s_small - e) - tol);
                wit = th.front();
            } else if (std::abs(s_large - e) > tol) {
                margin = std::max(margin, std::abs(s_large - e) - tol);
                wit = th.back();
            }
            out.push_back(make("radiative-P3", margin <= 0.0, 1.0, wit, margin, c));
        }
    }
    return out;
}

std::vector<CheckResult> check_concavity(const VirialLaw& law, const ScanGrid& grid) {
    const auto th = grid.thetas();
    double worst = -std::numeric_limits<double>::infinity();
    double at = th.front();
    int worst_n = 2;
    for (int n = 2; n <= law.n_trunc; ++n) {
        const CoefficientFn& b = law.b.at(static_cast<std::size_t>(n));
        for (double t : th) {
            // θ·d/dθ(θ²B') = 2θ²B' + θ³B''
            const double v = 2.0 * b.scaled(t, 1, 2.0) + b.scaled(t, 2, 3.0);
            if (v > worst) {
                worst = v;
                at = t;
                worst_n = n;
            }
        }
    }
    if (law.n_trunc < 2) return {make("concavity-P5", true, 1.0, at, 0.0, kNaN, "vacuous for N < 2")};
    const double tol = 1e-12;
    return {make("concavity-P5", worst <= tol, 1.0, at, worst, kNaN, "worst n = " + std::to_string(worst_n))};
}

std::vector<CheckResult> check_growth(const VirialLaw& law, const ScanGrid& grid, const ValidatorOptions& opt) {
    const auto th = grid.thetas();
    std::vector<double> large, small;
    for (double t : th) (t >= opt.theta_split ? large : small).push_back(t);
    const double slack = opt.exponent_slack;

    struct Worst {
        double margin = -std::numeric_limits<double>::infinity();
        double c = 0.0;
        double theta = 0.0;
        int n = 0;
    };
    auto run = [&](bool bis, const std::vector<double>& range, bool asymptotic) {
        Worst w;
        for (int n = 0; n <= law.n_trunc; ++n) {
            if (n == 1) continue;
            if (bis && n == 0) continue;
            const CoefficientFn& b = law.b.at(static_cast<std::size_t>(n));
            const double bbar = law.b_bar.at(static_cast<std::size_t>(n));
            const double exponent = bis ? law.alpha_bar * (law.gamma - 2.0 * n) / (2.0 * law.gamma) - slack
                                        : (law.gamma - n) * law.gamma_theta / law.gamma - 1.0 - slack;
            auto lhs = [&](double t) {
                if (bis) return abs_scaled(b, t, 1, 2.0) + abs_scaled(b, t, 0, 1.0) + std::abs(b.scaled(t, 0, 1.0) - bbar);
                return abs_scaled(b, t, 3, 3.0) + abs_scaled(b, t, 2, 2.0) + abs_scaled(b, t, 1, 1.0) +
                       abs_scaled(b, t, 0, 0.0);
            };
            const GrowthFit fit = fit_growth(range, exponent, lhs);
            double margin = fit.finite ? std::log10(std::max(fit.c, 1e-300) / kMaxConstant)
                                       : std::numeric_limits<double>::infinity();
            double witness = fit.witness;
            if (asymptotic) {
                const double excess = fit.slope - (exponent + slack) - 1e-6;
                if (excess > 0.0 && excess > margin) {
                    margin = excess;
                    witness = range.back();
                }
            }
            if (margin > w.margin) w = {margin, fit.c, witness, n};
        }
        return w;
    };

    std::vector<CheckResult> out;
    for (bool bis : {false, true}) {
        const std::string id = bis ? "growth-P6bis" : "growth-P6";
        if (large.empty()) {
            out.push_back(make(id, true, 1.0, opt.theta_split, 0.0, kNaN, "no scan points above theta_split"));
        } else {
            const Worst w = run(bis, large, true);
            out.push_back(make(id, w.margin <= 0.0, 1.0, w.theta, w.margin, w.c,
                               "theta >= " + fmt(opt.theta_split) + ", worst n = " + std::to_string(w.n)));
        }
        CheckResult info{id + "-small", CheckStatus::informational, 1.0, 0.0, 0.0, kNaN, "theta < theta_split"};
        if (!small.empty()) {
            const Worst w = run(bis, small, false);
            info.witness_theta = w.theta;
            info.margin = w.margin;
            info.fitted_c = w.c;
            info.note += ", worst n = " + std::to_string(w.n);
        }
        out.push_back(info);
    }
    return out;
}

std::vector<CheckResult> check_cv_and_entropy(const VirialLaw& law, const ScanGrid& grid) {
    const auto th = grid.thetas();
    const auto rh = grid.rhos();

    double cv_min = std::numeric_limits<double>::infinity();
    ThermoPoint cv_at{rh.front(), th.front()};
    double hess_worst = -std::numeric_limits<double>::infinity();
    ThermoPoint hess_at{rh.front(), th.front()};
    double maxwell_worst = 0.0;
    ThermoPoint maxwell_at{rh.front(), th.front()};

    for (std::size_t i = 0; i < rh.size(); ++i) {
        for (std::size_t j = 0; j < th.size(); ++j) {
            const ThermoPoint p{rh[i], th[j]};
            const double cv = specific_heat(law, p);
            if (cv < cv_min) {
                cv_min = cv;
                cv_at = p;
            }

            // Maxwell relation P = ρ²∂_ρe + θ∂_θP with a central difference in ρ.
            const double dr = 1e-6 * p.rho;
            const double de = (internal_energy(law, {p.rho + dr, p.theta}) -
                               internal_energy(law, {p.rho - dr, p.theta})) / (2.0 * dr);
            const double P = pressure(law, p);
            const double mres = std::abs(P - p.rho * p.rho * de - p.theta * pressure_dtheta(law, p)) / (1.0 + std::abs(P));
            if (mres > maxwell_worst) {
                maxwell_worst = mres;
                maxwell_at = p;
            }

            if (i == 0 || j == 0 || i + 1 == rh.size() || j + 1 == th.size()) continue;
            // Hessian of s in (v, e), v = 1/ρ, assembled from P, ∂P and C_v.
            double excess;
            if (!(cv > 0.0)) {
                excess = std::numeric_limits<double>::infinity();
            } else {
                const double Pr = pressure_drho(law, p);
                const double Pt = pressure_dtheta(law, p);
                const double t2cv = p.theta * p.theta * cv;
                const double q = p.theta * Pt - P;
                const double h22 = -1.0 / t2cv;
                const double h12 = q / t2cv;
                const double h11 = -p.rho * p.rho * Pr / p.theta - q * q / t2cv;
                const double tr = h11 + h22;
                const double det = h11 * h22 - h12 * h12;
                const double disc = std::sqrt(std::max(0.25 * tr * tr - det, 0.0));
                const double big = 0.5 * tr + std::copysign(disc, tr);
                const double other = big != 0.0 ? det / big : 0.0;
                const double scale = std::abs(big);
                excess = std::max(big, other) - 1e-8 * scale;
                if (scale > 0.0) excess /= scale;
            }
            if (excess > hess_worst) {
                hess_worst = excess;
                hess_at = p;
            }
        }
    }
    std::vector<CheckResult> out;
    out.push_back(make("cv-positive", cv_min >= -1e-12, cv_at.rho, cv_at.theta, -cv_min));
    out.push_back(make("entropy-concavity-P7", hess_worst <= 0.0, hess_at.rho, hess_at.theta, hess_worst, kNaN,
                       "negative semi-definite Hessian of s(1/rho, e)"));
    out.push_back(make("maxwell", maxwell_worst < 1e-6, maxwell_at.rho, maxwell_at.theta, maxwell_worst - 1e-6));
    return out;
}

std::vector<CheckResult> check_phi_gap(const VirialLaw& law, const ScanGrid& grid, const ValidatorOptions& opt) {
    const auto th = grid.thetas();
    const auto rh = grid.rhos();
    const double b1 = law.gamma / 2.0;
    const double b2 = law.alpha / 2.0 - opt.exponent_slack;
    double c = 0.0;
    ThermoPoint at{rh.front(), th.front()};
    for (double r : rh) {
        const double phi = phi_potential(law, r);
        const double dphi = phi_potential_drho(law, r);
        for (double t : th) {
            const ThermoPoint p{r, t};
            const double gap = std::abs(pressure(law, p) - dphi * r + phi);
            const double re = r * internal_energy(law, p);
            const double rhs = std::pow(r, b1) + std::pow(t, b2) + std::sqrt(std::max(re, 0.0));
            const double ratio = gap / rhs;
            if (ratio > c) {
                c = ratio;
                at = p;
            }
        }
    }
    CheckResult res = make("phi-gap", c <= kMaxConstant, at.rho, at.theta, std::log10(std::max(c, 1e-300) / kMaxConstant), c);
    if (res.status == CheckStatus::fail) {
        res.status = CheckStatus::informational;
        res.note = "fitted constant exceeds 1e6";
    }
    return {res};
}

std::optional<ThermoPoint> detect_nonmonotone(const VirialLaw& law, const ScanGrid& grid) {
    const auto th = grid.thetas();
    const auto rh = grid.rhos();
    double worst = 0.0;
    std::optional<ThermoPoint> out;
    for (double r : rh)
        for (double t : th) {
            const double d = pressure_drho(law, {r, t});
            if (d < worst) {
                worst = d;
                out = ThermoPoint{r, t};
            }
        }
    return out;
}

ValidationReport validate_law(const VirialLaw& law, int dim, const ScanGrid& grid, const ValidatorOptions& opt) {
    const auto count = static_cast<std::size_t>(law.n_trunc + 1);
    if (law.n_trunc < 0 || law.b.size() != count || law.b_bar.size() != count)
        throw ConfigError("law needs n_trunc+1 coefficients and limits");
    grid.check();
    ValidationReport rep;
    auto add = [&](std::vector<CheckResult> v) {
        for (auto& c : v) rep.checks.push_back(std::move(c));
    };
    add(validate_structure(law, dim));
    add(check_radiative(law, grid, opt));
    add(check_concavity(law, grid));
    add(check_growth(law, grid, opt));
    add(check_cv_and_entropy(law, grid));
    add(check_phi_gap(law, grid, opt));
    rep.nonmonotone_witness = detect_nonmonotone(law, grid);
    return rep;
}

}  // namespace nsfv
