#include "nsfv/fields.hpp"

#include <algorithm>
#include <cmath>

#include "nsfv/errors.hpp"

namespace nsfv {

PeriodicGrid::PeriodicGrid(int dim_, int n_, double length_) : dim(dim_), n(n_), length(length_) {
    if (dim != 1 && dim != 2) throw ConfigError("grid dimension must be 1 or 2");
    if (n < 8) throw ConfigError("grid needs at least 8 cells per axis");
    if (!(length > 0.0)) throw ConfigError("grid length must be positive");
}

ScalarField::ScalarField(const PeriodicGrid& grid, double value) : grid_(grid), values_(grid.size(), value) {}

ScalarField::ScalarField(const PeriodicGrid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw FormatError("field value count does not match grid");
}

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

bool ScalarField::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

ScalarField& ScalarField::axpy(double a, const ScalarField& other) {
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += a * other.values_[i];
    return *this;
}

ScalarField& ScalarField::operator*=(double a) {
    for (auto& v : values_) v *= a;
    return *this;
}

VectorField::VectorField(const PeriodicGrid& grid, double value)
    : comp_(static_cast<std::size_t>(grid.dim), ScalarField(grid, value)) {}

VectorField& VectorField::axpy(double a, const VectorField& other) {
    for (std::size_t i = 0; i < comp_.size(); ++i) comp_[i].axpy(a, other.comp_[i]);
    return *this;
}

VectorField& VectorField::operator*=(double a) {
    for (auto& c : comp_) c *= a;
    return *this;
}

bool VectorField::all_finite() const {
    return std::all_of(comp_.begin(), comp_.end(), [](const ScalarField& c) { return c.all_finite(); });
}

namespace {

// Central difference of f along one axis.
ScalarField partial(const ScalarField& f, int axis) {
    const auto& g = f.grid();
    ScalarField out(g);
    const double inv = 1.0 / (2.0 * g.h());
    for (std::size_t c = 0; c < f.size(); ++c)
        out[c] = (f[g.shift(c, axis, 1)] - f[g.shift(c, axis, -1)]) * inv;
    return out;
}

}  // namespace

VectorField gradient(const ScalarField& f) {
    VectorField out(f.grid());
    for (int a = 0; a < f.grid().dim; ++a) out[a] = partial(f, a);
    return out;
}

TensorField gradient(const VectorField& u) {
    const int d = u.dim();
    TensorField t{d, {}};
    t.comp.reserve(static_cast<std::size_t>(d * d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) t.comp.push_back(partial(u[i], j));
    return t;
}

ScalarField divergence(const VectorField& v) {
    ScalarField out(v.grid());
    for (int a = 0; a < v.dim(); ++a) out.axpy(1.0, partial(v[a], a));
    return out;
}

ScalarField laplacian(const ScalarField& f) {
    const auto& g = f.grid();
    ScalarField out(g);
    const double inv = 1.0 / (g.h() * g.h());
    for (std::size_t c = 0; c < f.size(); ++c) {
        double acc = 0.0;
        for (int a = 0; a < g.dim; ++a) acc += f[g.shift(c, a, 1)] - 2.0 * f[c] + f[g.shift(c, a, -1)];
        out[c] = acc * inv;
    }
    return out;
}

VectorField laplacian(const VectorField& u) {
    VectorField out(u.grid());
    for (int a = 0; a < u.dim(); ++a) out[a] = laplacian(u[a]);
    return out;
}

TensorField stress_tensor(const VectorField& u, double mu, double lambda) {
    const int d = u.dim();
    const TensorField du = gradient(u);
    ScalarField div(u.grid());
    for (int a = 0; a < d; ++a) div.axpy(1.0, du(a, a));
    TensorField s{d, std::vector<ScalarField>(static_cast<std::size_t>(d * d), ScalarField(u.grid()))};
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            auto& sij = s(i, j);
            sij.axpy(mu, du(i, j));
            sij.axpy(mu, du(j, i));
            if (i == j) sij.axpy(lambda, div);
        }
    }
    return s;
}

VectorField stress_divergence(const TensorField& s) {
    const auto& g = s.comp[0].grid();
    VectorField out(g);
    for (int i = 0; i < s.dim; ++i)
        for (int j = 0; j < s.dim; ++j) out[i].axpy(1.0, partial(s(i, j), j));
    return out;
}

ScalarField stress_contract(const TensorField& s, const TensorField& grad_u) {
    ScalarField out(s.comp[0].grid());
    for (std::size_t c = 0; c < out.size(); ++c) {
        double acc = 0.0;
        for (std::size_t k = 0; k < s.comp.size(); ++k) acc += s.comp[k][c] * grad_u.comp[k][c];
        out[c] = acc;
    }
    return out;
}

double integrate(const ScalarField& f) {
    double acc = 0.0;
    for (double v : f.values()) acc += v;
    return acc * f.grid().cell_volume();
}

double lp_norm(const ScalarField& f, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : f.values()) m = std::max(m, std::abs(v));
        return m;
    }
    double acc = 0.0;
    for (double v : f.values()) acc += std::pow(std::abs(v), p);
    return std::pow(acc * f.grid().cell_volume(), 1.0 / p);
}

FaceFlux llf_flux(const ScalarField& q, const VectorField& v, const ScalarField& wavespeed) {
    const auto& g = q.grid();
    FaceFlux flux;
    flux.axis.assign(static_cast<std::size_t>(g.dim), ScalarField(g));
    for (int a = 0; a < g.dim; ++a) {
        auto& fa = flux.axis[static_cast<std::size_t>(a)];
        const auto& va = v[a];
        for (std::size_t c = 0; c < q.size(); ++c) {
            const std::size_t r = g.shift(c, a, 1);
            const double speed = std::max(wavespeed[c], wavespeed[r]);
            fa[c] = 0.5 * (q[c] * va[c] + q[r] * va[r]) - 0.5 * speed * (q[r] - q[c]);
        }
    }
    return flux;
}

ScalarField flux_divergence(const FaceFlux& flux) {
    const auto& g = flux.axis[0].grid();
    ScalarField out(g);
    const double inv = 1.0 / g.h();
    for (int a = 0; a < g.dim; ++a) {
        const auto& fa = flux.axis[static_cast<std::size_t>(a)];
        for (std::size_t c = 0; c < out.size(); ++c) out[c] += (fa[c] - fa[g.shift(c, a, -1)]) * inv;
    }
    return out;
}

double inner(const ScalarField& a, const ScalarField& b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc * a.grid().cell_volume();
}

double inner(const VectorField& a, const VectorField& b) {
    double acc = 0.0;
    for (int k = 0; k < a.dim(); ++k) acc += inner(a[k], b[k]);
    return acc;
}

}  // namespace nsfv
