#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace smm {

/// Inputs of the algebraic inequality behind the gradient estimate.
/// Requires c, y > 0 (c = 0 accepted as a continuous extension), mu > 1,
/// eps in (0, 1) and y - mu z > 0.
struct AlgebraSample {
    double a = 0.0;
    double b = 0.0;
    double z = 0.0;
    double c = 0.0;
    double y = 1.0;
    double mu = 2.0;
    double eps = 0.5;
};

struct AlgebraSides {
    double lhs;
    double rhs;
    double slack() const { return lhs - rhs; }
    double scale() const;
};

/// lhs = (y-z)^2 - a sqrt(y)(y - mu z) - b y - c sqrt(y)
/// rhs = (y - mu z)^2/mu^2 - a^2 mu^2 (y - mu z)/(8(mu-1))
///       - (3/4) c^{4/3} (mu^2/(4 eps (mu-1)^2))^{1/3} - mu^2 b^2/(4(1-eps)(mu-1)^2)
/// Throws PreconditionError when the sample violates its invariants.
AlgebraSides algebra_sides(const AlgebraSample& s);
double algebra_slack(const AlgebraSample& s);

/// Draws sample `index` of the seeded Monte-Carlo suite: y log-uniform on
/// [1e-3, 1e3], z uniform on (-y, y/mu), mu on (1, 10], eps on (0.01, 0.99),
/// a, b on [-10, 10], c on (0, 10]. Each index has its own generator seeded
/// with seed ^ index, so results do not depend on evaluation order.
AlgebraSample algebra_draw(std::uint64_t seed, std::uint64_t index);

struct MonteCarloResult {
    std::uint64_t samples = 0;
    /// Minimum of slack / scale over all samples.
    double min_scaled_slack = 0.0;
    std::uint64_t worst_index = 0;
    AlgebraSample worst;
    /// Samples with slack < -tolerance * scale.
    std::vector<AlgebraSample> violations;
};

/// Evaluates the suite over indices [0, samples) on `threads` workers.
MonteCarloResult algebra_monte_carlo(std::uint64_t samples, std::uint64_t seed, double tolerance = 1e-10,
                                     unsigned threads = 1);

/// Twice continuously differentiable cutoff equal to 1 on [0, 1] and 0 on
/// [2, inf), with c1 = sup(-psi'/sqrt(psi)) and c2 = sup(-psi'').
struct CutoffProfile {
    std::function<double(double)> psi;
    std::function<double(double)> dpsi;
    std::function<double(double)> ddpsi;
    double c1;
    double c2;
    int grid_points;
};

/// psi(t) = 1 - S(t - 1) on [1, 2] with S(s) = 6 s^5 - 15 s^4 + 10 s^3;
/// c1 and c2 are maximised on a grid of `grid_points` points over [1, 2].
CutoffProfile quintic_cutoff(int grid_points = 100000);

/// -psi'/sqrt(psi), continuously extended by 0 where psi = 0.
double cutoff_ratio(const CutoffProfile& profile, double t);

struct CsSlack {
    /// |H|^2 - (tr H)^2 / n
    double hessian;
    /// (tr H)^2/n + w^2/(m-n) - (tr H - w)^2/m
    double weighted;
};

/// `hessian` is a symmetric n x n matrix in row-major order; w = <grad f, grad u>.
CsSlack cs_chain_check(int n, double m, std::span<const double> hessian, std::span<const double> grad_f,
                       std::span<const double> grad_u);

/// 1 + x - x coth(x) for x > 0.
double coth_bound_check(double x);

}  // namespace smm
