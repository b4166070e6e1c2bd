#include "smm/inequality_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

#include "smm/model_space.hpp"

namespace smm {

double AlgebraSides::scale() const { return 1.0 + std::abs(lhs) + std::abs(rhs); }

AlgebraSides algebra_sides(const AlgebraSample& s) {
    if (!(s.y > 0.0) || !(s.c >= 0.0) || !(s.mu > 1.0) || !(s.eps > 0.0 && s.eps < 1.0) ||
        !(s.y - s.mu * s.z > 0.0))
        throw PreconditionError("algebra_sides: sample violates c >= 0, y > 0, mu > 1, 0 < eps < 1, y - mu z > 0");

    const double sy = std::sqrt(s.y);
    const double gap = s.y - s.mu * s.z;
    const double mu2 = s.mu * s.mu;
    const double mm1 = s.mu - 1.0;

    AlgebraSides out;
    out.lhs = (s.y - s.z) * (s.y - s.z) - s.a * sy * gap - s.b * s.y - s.c * sy;
    // c^{4/3} term extended by 0 at c = 0.
    const double c_term =
        s.c == 0.0 ? 0.0 : 0.75 * std::pow(s.c, 4.0 / 3.0) * std::cbrt(mu2 / (4.0 * s.eps * mm1 * mm1));
    out.rhs = gap * gap / mu2 - s.a * s.a * mu2 * gap / (8.0 * mm1) - c_term -
              mu2 * s.b * s.b / (4.0 * (1.0 - s.eps) * mm1 * mm1);
    return out;
}

double algebra_slack(const AlgebraSample& s) { return algebra_sides(s).slack(); }

AlgebraSample algebra_draw(std::uint64_t seed, std::uint64_t index) {
    std::mt19937_64 rng(seed ^ index);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    // Open-interval draws: retry the (measure-zero) endpoints.
    auto open01 = [&] {
        double v;
        do v = unit(rng);
        while (v == 0.0);
        return v;
    };
    AlgebraSample s;
    s.y = std::pow(10.0, -3.0 + 6.0 * unit(rng));
    s.mu = 1.0 + 9.0 * (1.0 - unit(rng));
    s.eps = 0.01 + 0.98 * open01();
    s.a = -10.0 + 20.0 * unit(rng);
    s.b = -10.0 + 20.0 * unit(rng);
    s.c = 10.0 * (1.0 - unit(rng));
    const double lo = -s.y;
    const double hi = s.y / s.mu;
    do s.z = lo + (hi - lo) * open01();
    while (!(s.y - s.mu * s.z > 0.0) || s.z <= lo);
    return s;
}

MonteCarloResult algebra_monte_carlo(std::uint64_t samples, std::uint64_t seed, double tolerance,
                                     unsigned threads) {
    threads = std::max(1u, threads);
    std::vector<MonteCarloResult> partial(threads);
    auto worker = [&](unsigned w) {
        MonteCarloResult& r = partial[w];
        r.min_scaled_slack = INFINITY;
        // Contiguous chunks keep the merged result independent of the thread count.
        const std::uint64_t begin = samples * w / threads;
        const std::uint64_t end = samples * (w + 1) / threads;
        for (std::uint64_t i = begin; i < end; ++i) {
            const AlgebraSample s = algebra_draw(seed, i);
            const AlgebraSides sides = algebra_sides(s);
            const double scaled = sides.slack() / sides.scale();
            if (scaled < r.min_scaled_slack) {
                r.min_scaled_slack = scaled;
                r.worst_index = i;
                r.worst = s;
            }
            if (scaled < -tolerance) r.violations.push_back(s);
            ++r.samples;
        }
    };
    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    }

    MonteCarloResult total;
    total.min_scaled_slack = INFINITY;
    for (auto& r : partial) {
        total.samples += r.samples;
        if (r.samples > 0 && r.min_scaled_slack < total.min_scaled_slack) {
            total.min_scaled_slack = r.min_scaled_slack;
            total.worst_index = r.worst_index;
            total.worst = r.worst;
        }
        total.violations.insert(total.violations.end(), r.violations.begin(), r.violations.end());
    }
    return total;
}

namespace {

double smoothstep(double s) { return s * s * s * (10.0 + s * (-15.0 + 6.0 * s)); }
double smoothstep_d1(double s) { return 30.0 * s * s * (1.0 - s) * (1.0 - s); }
double smoothstep_d2(double s) { return 60.0 * s * (1.0 - s) * (1.0 - 2.0 * s); }

}  // namespace

CutoffProfile quintic_cutoff(int grid_points) {
    if (grid_points < 3) throw PreconditionError("quintic_cutoff: need at least three grid points");
    CutoffProfile p;
    p.psi = [](double t) {
        if (t <= 1.0) return 1.0;
        if (t >= 2.0) return 0.0;
        return 1.0 - smoothstep(t - 1.0);
    };
    p.dpsi = [](double t) { return (t <= 1.0 || t >= 2.0) ? 0.0 : -smoothstep_d1(t - 1.0); };
    p.ddpsi = [](double t) { return (t <= 1.0 || t >= 2.0) ? 0.0 : -smoothstep_d2(t - 1.0); };
    p.grid_points = grid_points;
    p.c1 = 0.0;
    p.c2 = 0.0;
    for (int i = 0; i < grid_points; ++i) {
        const double t = 1.0 + static_cast<double>(i) / (grid_points - 1);
        p.c1 = std::max(p.c1, cutoff_ratio(p, t));
        p.c2 = std::max(p.c2, -p.ddpsi(t));
    }
    return p;
}

double cutoff_ratio(const CutoffProfile& profile, double t) {
    const double psi = profile.psi(t);
    if (psi <= 0.0) return 0.0;
    return -profile.dpsi(t) / std::sqrt(psi);
}

CsSlack cs_chain_check(int n, double m, std::span<const double> hessian, std::span<const double> grad_f,
                       std::span<const double> grad_u) {
    if (n < 2 || !(m > n)) throw PreconditionError("cs_chain_check: requires n >= 2 and m > n");
    const auto dim = static_cast<std::size_t>(n);
    if (hessian.size() != dim * dim || grad_f.size() != dim || grad_u.size() != dim)
        throw PreconditionError("cs_chain_check: dimension mismatch");
    double norm_sq = 0.0;
    double trace = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        trace += hessian[i * dim + i];
        for (std::size_t j = 0; j < dim; ++j) norm_sq += hessian[i * dim + j] * hessian[i * dim + j];
    }
    double w = 0.0;
    for (std::size_t i = 0; i < dim; ++i) w += grad_f[i] * grad_u[i];
    CsSlack s;
    s.hessian = norm_sq - trace * trace / n;
    s.weighted = trace * trace / n + w * w / (m - n) - (trace - w) * (trace - w) / m;
    return s;
}

double coth_bound_check(double x) {
    if (!(x > 0.0)) throw PreconditionError("coth_bound_check: requires x > 0");
    // x coth x = 1 + x^2/3 - x^4/45 + ...
    if (x < 1e-4) return x - x * x / 3.0 + x * x * x * x / 45.0;
    return 1.0 + x - x / std::tanh(x);
}

}  // namespace smm
