#include "smm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

#include "smm/tridiagonal.hpp"

namespace smm {

BVPProblem make_problem(ModelSpace space, NonlinearityFamily family, std::optional<double> dirichlet) {
    if (space.closed() && dirichlet)
        throw PreconditionError("make_problem: the closed sphere takes no Dirichlet data");
    if (!space.closed() && !dirichlet)
        throw PreconditionError("make_problem: open models need a Dirichlet value");
    if (dirichlet && !(*dirichlet > 0.0))
        throw PreconditionError("make_problem: Dirichlet value must be positive");
    return BVPProblem{std::move(space), std::move(family), dirichlet, std::monostate{}};
}

const char* to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::converged: return "converged";
        case SolveStatus::non_convergence: return "non_convergence";
        case SolveStatus::positivity_loss: return "positivity_loss";
        case SolveStatus::singular_jacobian: return "singular_jacobian";
    }
    return "unknown";
}

namespace {

double sup_norm(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

bool all_positive(std::span<const double> v, double floor = 0.0) {
    return std::all_of(v.begin(), v.end(), [floor](double x) { return std::isfinite(x) && x > floor; });
}

// F_t(u) = L u + t Sigma(r, u), boundary row replaced on open models.
std::vector<double> scaled_residual(const BVPProblem& problem, const DiscreteOperator& op,
                                    std::span<const double> u, double t) {
    std::vector<double> f = op.apply(u);
    const RadialGrid& grid = op.grid;
    for (std::size_t i = 0; i < f.size(); ++i) f[i] += t * sigma_value(problem.family, grid.node(i), u[i]);
    if (problem.dirichlet) f.back() = u.back() - *problem.dirichlet;
    return f;
}

Field initial_field(const BVPProblem& problem, const RadialGrid& grid) {
    if (const auto* field = std::get_if<Field>(&problem.initial)) {
        if (!(field->grid() == grid)) throw PreconditionError("solve_newton: initial field on another grid");
        return *field;
    }
    double level = problem.dirichlet.value_or(1.0);
    if (const auto* c = std::get_if<double>(&problem.initial)) level = *c;
    Field u(grid, level);
    return u;
}

}  // namespace

Field residual(const BVPProblem& problem, const Field& u) {
    if (!u.positive()) throw PositivityError("residual: u must be positive at every node");
    const DiscreteOperator op = assemble_witten(problem.space, u.grid());
    return Field(u.grid(), scaled_residual(problem, op, u.values(), 1.0));
}

SolveResult solve_newton(const BVPProblem& problem, const RadialGrid& grid, const SolverConfig& config) {
    if (!(config.newton_tol > 0.0) || config.max_iter < 1 || config.max_halvings < 0 ||
        config.continuation_steps < 1 || !(config.positivity_floor >= 0.0 && config.positivity_floor < 1.0))
        throw PreconditionError("solve_newton: invalid solver configuration");
    if (problem.space.closed() == problem.dirichlet.has_value())
        throw PreconditionError("solve_newton: boundary data does not match the model");

    const DiscreteOperator op = assemble_witten(problem.space, grid);
    const std::size_t size = grid.size();
    const std::size_t last = size - 1;
    const std::vector<double> weights = volume_weights(problem.space, grid);
    double total_weight = 0.0;
    for (double w : weights) total_weight += w;

    SolveResult result{initial_field(problem, grid), 0.0, 0, false, false, SolveStatus::non_convergence, {}, {}};
    std::vector<double> u(result.u.values().begin(), result.u.values().end());
    if (problem.dirichlet) u.back() = *problem.dirichlet;

    auto finish = [&](SolveStatus status, double norm, std::string message) {
        result.u = Field(grid, u);
        result.residual_norm = norm;
        result.positive = all_positive(u);
        result.status = status;
        result.converged = status == SolveStatus::converged;
        result.message = std::move(message);
        return result;
    };

    if (!all_positive(u))
        return finish(SolveStatus::positivity_loss, INFINITY, "initial guess is not positive");
    const double floor = config.positivity_floor * *std::max_element(u.begin(), u.end());

    double norm = INFINITY;
    for (int step = 1; step <= config.continuation_steps; ++step) {
        const double t = static_cast<double>(step) / config.continuation_steps;
        result.history.clear();
        std::vector<double> f = scaled_residual(problem, op, u, t);
        norm = sup_norm(f);
        int it = 0;
        while (norm > config.newton_tol) {
            if (it == config.max_iter) {
                std::ostringstream msg;
                msg << "max_iter reached at continuation level t=" << t << " with residual " << norm;
                return finish(SolveStatus::non_convergence, norm, msg.str());
            }
            result.history.push_back(norm);

            std::vector<double> lower = op.lower;
            std::vector<double> diag = op.diag;
            std::vector<double> upper = op.upper;
            bool reaction_free = true;
            for (std::size_t i = 0; i < size; ++i) {
                const double su = t * sigma_jet(problem.family, grid.node(i), u[i]).sigma_u;
                diag[i] += su;
                reaction_free = reaction_free && su == 0.0;
            }
            std::vector<double> rhs(size);
            for (std::size_t i = 0; i < size; ++i) rhs[i] = -f[i];

            const bool pinned = problem.space.closed() && reaction_free;
            if (problem.dirichlet || pinned) {
                lower[last] = 0.0;
                diag[last] = 1.0;
                upper[last] = 0.0;
                if (pinned) rhs[last] = 0.0;
            }

            std::vector<double> delta;
            try {
                delta = solve_tridiagonal(std::move(lower), std::move(diag), std::move(upper), std::move(rhs));
            } catch (const SingularSystemError& e) {
                return finish(SolveStatus::singular_jacobian, norm, e.what());
            }
            if (pinned) {
                double mean = 0.0;
                for (std::size_t i = 0; i < size; ++i) mean += weights[i] * delta[i];
                mean /= total_weight;
                for (double& d : delta) d -= mean;
            }

            double lambda = 1.0;
            bool accepted = false;
            bool saw_positive = false;
            std::vector<double> trial(size);
            std::vector<double> f_trial;
            for (int k = 0; k <= config.max_halvings; ++k, lambda *= 0.5) {
                for (std::size_t i = 0; i < size; ++i) trial[i] = u[i] + lambda * delta[i];
                if (!all_positive(trial, floor)) continue;
                saw_positive = true;
                f_trial = scaled_residual(problem, op, trial, t);
                const double trial_norm = sup_norm(f_trial);
                if (trial_norm < norm) {
                    accepted = true;
                    u.swap(trial);
                    f.swap(f_trial);
                    norm = trial_norm;
                    break;
                }
            }
            ++it;
            ++result.iterations;
            if (!accepted) {
                std::ostringstream msg;
                msg << "damping exhausted at t=" << t << ", residual " << norm;
                return finish(saw_positive ? SolveStatus::non_convergence : SolveStatus::positivity_loss,
                              norm, msg.str());
            }
        }
        result.history.push_back(norm);
    }
    return finish(SolveStatus::converged, norm, "");
}

namespace exact_profiles {

ExactProfile cosine_bump(double a, double b, double omega) {
    std::ostringstream label;
    label << a << "+" << b << "*cos(" << omega << "*r)";
    const double w = omega;
    return {label.str(),
            [a, b, w](double r) { return a + b * std::cos(w * r); },
            [b, w](double r) { return -b * w * std::sin(w * r); },
            [b, w](double r) { return -b * w * w * std::cos(w * r); },
            [b, w](double r) { return b * w * w * w * std::sin(w * r); },
            [b, w](double r) { return b * w * w * w * w * std::cos(w * r); }};
}

ExactProfile gaussian_bump(double a, double b, double c) {
    std::ostringstream label;
    label << a << "+" << b << "*exp(-" << c << "*r^2)";
    return {label.str(),
            [a, b, c](double r) { return a + b * std::exp(-c * r * r); },
            [b, c](double r) { return -2.0 * b * c * r * std::exp(-c * r * r); },
            [b, c](double r) { return b * std::exp(-c * r * r) * (4.0 * c * c * r * r - 2.0 * c); },
            [b, c](double r) {
                return b * std::exp(-c * r * r) * (12.0 * c * c * r - 8.0 * c * c * c * r * r * r);
            },
            [b, c](double r) {
                const double r2 = r * r;
                return b * std::exp(-c * r2) * (16.0 * c * c * c * c * r2 * r2 - 48.0 * c * c * c * r2 + 12.0 * c * c);
            }};
}

}  // namespace exact_profiles

namespace {

// Values near a pole are rebuilt from an even (or odd) quadratic fit through
// samples at distance delta and 2 delta, where the raw formulas are free of
// the 1/r cancellation.
constexpr double kPoleDelta = 1e-3;

struct SourceFormulas {
    ModelSpace space;
    ExactProfile exact;

    double drift(double r) const { return drift_laplacian_radial(space, r); }
    double drift_d1(double r) const {
        const double q = space.warp().d1(r) / space.warp().value(r);
        return (space.n() - 1.0) * (space.warp().d2(r) / space.warp().value(r) - q * q) -
               space.weight().d2(r);
    }
    double drift_d2(double r) const {
        const double phi = space.warp().value(r);
        const double q = space.warp().d1(r) / phi;
        return (space.n() - 1.0) * (space.warp().d3(r) / phi - 3.0 * space.warp().d2(r) / phi * q + 2.0 * q * q * q) -
               space.weight().d3(r);
    }

    double raw(double r, int order) const {
        const double d = drift(r);
        switch (order) {
            case 0: return -(exact.d2(r) + d * exact.d1(r));
            case 1: return -(exact.d3(r) + drift_d1(r) * exact.d1(r) + d * exact.d2(r));
            default:
                return -(exact.d4(r) + drift_d2(r) * exact.d1(r) + 2.0 * drift_d1(r) * exact.d2(r) +
                         d * exact.d3(r));
        }
    }

    double regular(double r, int order) const {
        double pole = 0.0;
        double sign = 1.0;
        double t = r;
        if (r >= kPoleDelta) {
            if (!space.closed() || space.r_max() - r >= kPoleDelta) return raw(r, order);
            pole = space.r_max();
            sign = -1.0;
            t = space.r_max() - r;
        }
        auto at = [&](double tt) { return raw(pole + sign * tt, order); };
        const double t1 = kPoleDelta;
        const double t2 = 2.0 * kPoleDelta;
        if (order == 1) {
            // d/dr is odd about the pole: fit q(t) = value / (sign t), even in t.
            const double q1 = at(t1) / (sign * t1);
            const double q2 = at(t2) / (sign * t2);
            const double b = (q2 - q1) / (t2 * t2 - t1 * t1);
            const double a = q1 - b * t1 * t1;
            return sign * t * (a + b * t * t);
        }
        const double g1 = at(t1);
        const double g2 = at(t2);
        const double b = (g2 - g1) / (t2 * t2 - t1 * t1);
        const double a = g1 - b * t1 * t1;
        return a + b * t * t;
    }
};

}  // namespace

SpatialSource manufactured_source(const ModelSpace& space, const ExactProfile& exact) {
    if (!space.warp().d3 || !space.weight().d3)
        throw PreconditionError("manufacture: warp and weight need third derivatives");
    if (!exact.value || !exact.d1 || !exact.d2 || !exact.d3 || !exact.d4)
        throw PreconditionError("manufacture: exact profile needs four derivatives");
    if (std::abs(exact.d1(0.0)) > 1e-12)
        throw PreconditionError("manufacture: exact profile must satisfy u'(0) = 0");
    if (space.closed() && std::abs(exact.d1(space.r_max())) > 1e-9)
        throw PreconditionError("manufacture: exact profile must satisfy u'(pi) = 0 on the sphere");
    for (int i = 0; i <= 1000; ++i) {
        if (!(exact.value(space.r_max() * i / 1000.0) > 0.0))
            throw PreconditionError("manufacture: exact profile must be positive");
    }

    auto formulas = std::make_shared<const SourceFormulas>(SourceFormulas{space, exact});
    ScalarFn source;
    source.label = "-Delta_f(" + exact.label + ")";
    source.value = [formulas](double r) { return formulas->regular(r, 0); };
    source.d1 = [formulas](double r) { return formulas->regular(r, 1); };
    source.d2 = [formulas](double r) { return formulas->regular(r, 2); };
    source.constant = false;
    return SpatialSource{std::move(source)};
}

Manufactured manufacture(const ModelSpace& space, const ExactProfile& exact, const RadialGrid& grid) {
    if (grid.closed() != space.closed() || std::abs(grid.r_max() - space.r_max()) > 1e-12 * space.r_max())
        throw PreconditionError("manufacture: grid does not fit the space");
    SpatialSource source = manufactured_source(space, exact);
    return Manufactured{NonlinearityFamily{std::move(source)}, Field::sample(grid, exact.value)};
}

}  // namespace smm
