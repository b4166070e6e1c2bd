#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "smm/grid_ops.hpp"
#include "smm/model_space.hpp"
#include "smm/nonlinearity.hpp"

namespace smm {

/// Radial boundary-value problem Delta_f u + Sigma(x, u) = 0.
///
/// Open models carry Dirichlet data u(r_max) = dirichlet > 0; the closed
/// sphere has both-pole symmetry and no boundary data.
struct BVPProblem {
    ModelSpace space;
    NonlinearityFamily family;
    std::optional<double> dirichlet;
    /// Constant level or a full field; std::monostate picks the default
    /// (the boundary value on open models, 1 on the closed sphere).
    std::variant<std::monostate, double, Field> initial;
};

/// Validates the boundary data against the model (throws PreconditionError).
BVPProblem make_problem(ModelSpace space, NonlinearityFamily family,
                        std::optional<double> dirichlet = std::nullopt);

struct SolverConfig {
    double newton_tol = 1e-10;
    int max_iter = 50;
    int max_halvings = 20;
    int continuation_steps = 1;
    /// Iterates must stay above this fraction of the initial guess's maximum;
    /// a field drifting below it counts as lost positivity.
    double positivity_floor = 1e-12;
};

enum class SolveStatus { converged, non_convergence, positivity_loss, singular_jacobian };

const char* to_string(SolveStatus status);

struct SolveResult {
    Field u;
    double residual_norm = 0.0;
    int iterations = 0;
    bool positive = false;
    bool converged = false;
    SolveStatus status = SolveStatus::non_convergence;
    /// Residual sup-norm before each Newton step at the final continuation
    /// level, ending with the accepted value.
    std::vector<double> history;
    std::string message;
};

/// Node-wise Delta_f u + Sigma(r, u); on open models the last row is
/// u_N - dirichlet. Throws PositivityError unless u > 0 everywhere.
Field residual(const BVPProblem& problem, const Field& u);

/// Damped Newton with continuation in a factor t multiplying Sigma.
///
/// Each Jacobian is assemble_witten plus diag(t Sigma_u) and is solved
/// directly. Steps are halved until the iterate stays above the positivity
/// floor and the residual sup-norm decreases. On the closed sphere a Jacobian without a
/// Sigma_u term has the constants as kernel; the step is then pinned at the
/// far pole and shifted to preserve the weighted mean.
SolveResult solve_newton(const BVPProblem& problem, const RadialGrid& grid,
                         const SolverConfig& config = {});

/// Smooth positive radial profile with four closed-form derivatives.
struct ExactProfile {
    std::string label;
    std::function<double(double)> value;
    std::function<double(double)> d1;
    std::function<double(double)> d2;
    std::function<double(double)> d3;
    std::function<double(double)> d4;
};

namespace exact_profiles {
/// a + b cos(omega r)
ExactProfile cosine_bump(double a, double b, double omega = 1.0);
/// a + b exp(-c r^2)
ExactProfile gaussian_bump(double a, double b, double c);
}  // namespace exact_profiles

struct Manufactured {
    NonlinearityFamily family;
    Field exact;
};

/// Source Sigma(r) = -Delta_f u_exact(r), so that u_exact solves the
/// equation exactly. Needs third derivatives of warp and weight.
Manufactured manufacture(const ModelSpace& space, const ExactProfile& exact, const RadialGrid& grid);

/// Spatial source alone (no grid).
SpatialSource manufactured_source(const ModelSpace& space, const ExactProfile& exact);

}  // namespace smm
