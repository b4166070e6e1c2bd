#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "smm/model_space.hpp"
#include "smm/nonlinearity.hpp"

namespace smm {

/// Uniform radial grid r_i = i h, h = r_max / N, i = 0..N.
///
/// `closed` marks the full sphere, whose last node is a second pole rather
/// than a boundary.
class RadialGrid {
public:
    static constexpr int kMinIntervals = 16;

    RadialGrid(double r_max, int intervals, bool closed = false);
    static RadialGrid for_space(const ModelSpace& space, int intervals);

    int intervals() const { return intervals_; }
    std::size_t size() const { return static_cast<std::size_t>(intervals_) + 1; }
    double h() const { return r_max_ / intervals_; }
    double r_max() const { return r_max_; }
    bool closed() const { return closed_; }
    double node(std::size_t i) const;

    /// Largest index with node(i) <= radius (within rounding).
    std::size_t last_index_within(double radius) const;

    bool operator==(const RadialGrid&) const = default;

private:
    double r_max_;
    int intervals_;
    bool closed_;
};

/// Node values on a RadialGrid.
class Field {
public:
    Field(RadialGrid grid, std::vector<double> values);
    explicit Field(RadialGrid grid, double fill = 0.0);

    static Field sample(const RadialGrid& grid, const std::function<double(double)>& fn);

    const RadialGrid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    /// True when every node value is finite and strictly positive.
    bool positive() const;
    double max_abs() const;
    double max_abs(std::size_t first, std::size_t last) const;

private:
    RadialGrid grid_;
    std::vector<double> values_;
};

enum class Closure { pole, one_sided };

/// Discrete weighted Laplacian u'' + D(r) u' with D = (n-1) warp'/warp - f'.
///
/// Rows 0..N-1 are tridiagonal (row 0 is the pole row 2n(u_1 - u_0)/h^2).
/// Row N is a pole row on the closed sphere and a one-sided second-order
/// closure on u_N..u_{N-3} otherwise.
struct DiscreteOperator {
    RadialGrid grid;
    int dimension = 2;
    std::vector<double> lower;
    std::vector<double> diag;
    std::vector<double> upper;
    /// D(r_i) at non-pole nodes, 0 at poles.
    std::vector<double> drift;
    Closure far_closure = Closure::one_sided;
    /// Coefficients on u_N, u_{N-1}, u_{N-2}, u_{N-3} for the one-sided row.
    std::array<double, 4> far_stencil{};

    std::vector<double> apply(std::span<const double> u) const;
    Field apply(const Field& u) const;
};

DiscreteOperator assemble_witten(const ModelSpace& space, const RadialGrid& grid);

/// Signed radial derivative: central differences, 0 at poles, one-sided
/// second order at an open boundary.
Field derivative(const Field& u);
/// Second radial derivative with the same closures as assemble_witten.
Field second_derivative(const Field& u);
Field gradient_norm(const Field& u);

/// |Hess u|^2 = (u'')^2 + (n-1)(warp' u' / warp)^2, n (u'')^2 at poles.
Field hessian_norm_sq_radial(const Field& u, const ModelSpace& space);

/// Residual of an identity on a node window [first, last]; nodes outside the
/// window are set to zero.
struct IdentityResidual {
    Field residual;
    std::size_t first;
    std::size_t last;

    double max_abs() const { return residual.max_abs(first, last); }
};

/// Delta_f h + |grad h|^2 + e^{-h} Sigma(x, e^h) with h = log u, every node.
IdentityResidual check_h_equation(const Field& u, const NonlinearityFamily& family,
                                  const ModelSpace& space);

/// LHS - RHS of the Delta_f H identity for H = |grad h|^2 + mu e^{-h} Sigma,
/// with Ric_f^m(grad h, grad h) = lambda_radial h'^2 plus the separate
/// 2<grad f, grad h>^2/(m-n) term. Valid for h = log u of a solution.
/// On an open grid the last two nodes are excluded (one-sided error of H).
IdentityResidual check_bochner_identity(const Field& h, const ModelSpace& space, double mu,
                                        const NonlinearityFamily& family);

/// Node-wise |Hess h|^2 + (f' h')^2/(m-n) - (Delta_f h)^2/m.
Field cs_chain_slack(const Field& h, const ModelSpace& space);

/// Trapezoidal weights of the radial measure warp^{n-1} e^{-f} dr.
std::vector<double> volume_weights(const ModelSpace& space, const RadialGrid& grid);

}  // namespace smm
