#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace nsfv {

/// Uniform periodic grid on [0, length)^dim, cell centred. Cells are stored
/// with x fastest: flat = iy·n + ix.
struct PeriodicGrid {
    int dim = 1;
    int n = 64;
    double length = 1.0;

    PeriodicGrid() = default;
    PeriodicGrid(int dim_, int n_, double length_ = 1.0);

    [[nodiscard]] double h() const noexcept { return length / n; }
    [[nodiscard]] std::size_t size() const noexcept {
        return dim == 1 ? static_cast<std::size_t>(n) : static_cast<std::size_t>(n) * n;
    }
    /// Cell volume h^dim.
    [[nodiscard]] double cell_volume() const noexcept { return dim == 1 ? h() : h() * h(); }

    /// Flat index of the neighbour of `cell` shifted by `offset` along `axis`, wrapping.
    [[nodiscard]] std::size_t shift(std::size_t cell, int axis, int offset) const noexcept {
        const auto nn = static_cast<std::size_t>(n);
        const std::size_t stride = axis == 0 ? 1 : nn;
        const std::size_t coord = (cell / stride) % nn;
        const std::size_t moved = (coord + nn + static_cast<std::size_t>(offset % n + n)) % nn;
        return cell - coord * stride + moved * stride;
    }

    /// Cell-centre coordinate along `axis`.
    [[nodiscard]] double center(std::size_t cell, int axis) const noexcept {
        const auto nn = static_cast<std::size_t>(n);
        const std::size_t stride = axis == 0 ? 1 : nn;
        return (static_cast<double>((cell / stride) % nn) + 0.5) * h();
    }

    friend bool operator==(const PeriodicGrid&, const PeriodicGrid&) = default;
};

/// One real number per cell.
class ScalarField {
public:
    ScalarField() = default;
    explicit ScalarField(const PeriodicGrid& grid, double value = 0.0);
    ScalarField(const PeriodicGrid& grid, std::vector<double> values);

    [[nodiscard]] const PeriodicGrid& grid() const noexcept { return grid_; }
    [[nodiscard]] std::size_t size() const noexcept { return values_.size(); }
    [[nodiscard]] double& operator[](std::size_t i) noexcept { return values_[i]; }
    [[nodiscard]] double operator[](std::size_t i) const noexcept { return values_[i]; }
    [[nodiscard]] std::span<const double> values() const noexcept { return values_; }
    [[nodiscard]] std::span<double> values() noexcept { return values_; }

    [[nodiscard]] double min() const;
    [[nodiscard]] double max() const;
    [[nodiscard]] bool all_finite() const;

    /// this += a·other
    ScalarField& axpy(double a, const ScalarField& other);
    ScalarField& operator*=(double a);

private:
    PeriodicGrid grid_;
    std::vector<double> values_;
};

/// `dim` scalar components sharing one grid.
class VectorField {
public:
    VectorField() = default;
    explicit VectorField(const PeriodicGrid& grid, double value = 0.0);

    [[nodiscard]] const PeriodicGrid& grid() const noexcept { return comp_[0].grid(); }
    [[nodiscard]] int dim() const noexcept { return static_cast<int>(comp_.size()); }
    [[nodiscard]] ScalarField& operator[](int axis) noexcept { return comp_[static_cast<std::size_t>(axis)]; }
    [[nodiscard]] const ScalarField& operator[](int axis) const noexcept {
        return comp_[static_cast<std::size_t>(axis)];
    }

    VectorField& axpy(double a, const VectorField& other);
    VectorField& operator*=(double a);
    [[nodiscard]] bool all_finite() const;

private:
    std::vector<ScalarField> comp_;
};

/// Per-cell d×d tensor, component (i, j) stored in `comp[i*dim + j]`.
struct TensorField {
    int dim = 1;
    std::vector<ScalarField> comp;

    [[nodiscard]] const ScalarField& operator()(int i, int j) const {
        return comp[static_cast<std::size_t>(i * dim + j)];
    }
    [[nodiscard]] ScalarField& operator()(int i, int j) { return comp[static_cast<std::size_t>(i * dim + j)]; }
};

/// Face fluxes along each axis: `axis[a][c]` is the flux through the face
/// between cell c and its +1 neighbour along axis a.
struct FaceFlux {
    std::vector<ScalarField> axis;
};

// Central second-order stencils.
VectorField gradient(const ScalarField& f);
/// Velocity gradient tensor, entry (i, j) = ∂_j u_i.
TensorField gradient(const VectorField& u);
ScalarField divergence(const VectorField& v);
/// Compact (f(c+e) − 2f(c) + f(c−e))/h² summed over axes.
ScalarField laplacian(const ScalarField& f);
VectorField laplacian(const VectorField& u);

/// S = μ(∇u + ∇uᵀ) + λ div u Id.
TensorField stress_tensor(const VectorField& u, double mu, double lambda);
/// (div S)_i = Σ_j ∂_j S_ij with central differences.
VectorField stress_divergence(const TensorField& s);
/// S:∇u = Σ_ij S_ij ∂_j u_i.
ScalarField stress_contract(const TensorField& s, const TensorField& grad_u);

[[nodiscard]] double integrate(const ScalarField& f);
[[nodiscard]] double lp_norm(const ScalarField& f, double p);

/// Local Lax–Friedrichs advective flux of q carried by v:
/// F = ½(q_c v_c + q_{c+1} v_{c+1}) − ½ a (q_{c+1} − q_c), a = max of adjacent wavespeeds.
FaceFlux llf_flux(const ScalarField& q, const VectorField& v, const ScalarField& wavespeed);
/// Conservative flux difference Σ_a (F_{c+½} − F_{c−½})/h.
ScalarField flux_divergence(const FaceFlux& flux);

/// ⟨a, b⟩ = h^d Σ a·b
[[nodiscard]] double inner(const ScalarField& a, const ScalarField& b);
[[nodiscard]] double inner(const VectorField& a, const VectorField& b);

}  // namespace nsfv
