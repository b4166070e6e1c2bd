#pragma once

#include <optional>
#include <string>

#include "smm/grid_ops.hpp"
#include "smm/model_space.hpp"
#include "smm/nonlinearity.hpp"
#include "smm/solver.hpp"

namespace smm {

/// Free parameters and geometric constants of the gradient estimate.
struct EstimateParams {
    double mu = 2.0;
    double eps = 0.5;
    /// Ball radius; the estimate holds on B_R and uses data on B_{2R}.
    double R = 1.0;
    double c1 = 0.0;
    double c2 = 0.0;
    double m = 2.0;
    double k = 0.0;
    /// Discretisation constant: tolerance = c_tol * h^2 * (1 + |rhs|).
    double c_tol = 10.0;

    void validate() const;
};

/// Parameters with c1, c2 from the quintic cutoff and k from
/// curvature_lower_bound(space, 2R).
EstimateParams default_params(const ModelSpace& space, double R, double mu = 2.0, double eps = 0.5);

/// Solution-dependent constants of the estimate, as grid suprema/infima.
struct SupInfBundle {
    double A_sigma = 0.0;
    double B_sigma = 0.0;
    double C_sigma = 0.0;
    /// sup over B_2R of (u Sigma_u - Sigma)_+ / u
    double sup_growth = 0.0;
    /// inf over B_R of (Sigma)_- / u, with (x)_- = min(x, 0)
    double inf_neg_sigma = 0.0;
    /// Last node index of the supremum region and of B_R.
    std::size_t outer_last = 0;
    std::size_t inner_last = 0;
};

/// Supremum region: B_2R when `global` is false, the whole domain otherwise.
SupInfBundle sup_inf_bundle(const Field& u, const NonlinearityFamily& family, const ModelSpace& space,
                            const EstimateParams& params, bool global = false);

struct RhsBreakdown {
    double geometric = 0.0;
    double nonlinear = 0.0;
    double growth = 0.0;
    double total = 0.0;
};

/// Right-hand side of the local estimate on B_R.
RhsBreakdown local_rhs(const SupInfBundle& bundle, const EstimateParams& params);
/// Right-hand side of the global estimate (no 1/R^2 block).
RhsBreakdown global_rhs(const SupInfBundle& bundle, const EstimateParams& params);

struct EstimateReport {
    /// |grad u|^2/(mu u^2) + Sigma/u on the checked region; 0 outside it.
    Field lhs;
    std::size_t region_last = 0;
    double rhs = 0.0;
    RhsBreakdown breakdown;
    SupInfBundle bundle;
    double max_lhs = 0.0;
    double min_slack = 0.0;
    double witness_r = 0.0;
    double tolerance = 0.0;
    double h = 0.0;
    bool pass = false;
};

EstimateReport check_local_estimate(const Field& u, const NonlinearityFamily& family, const ModelSpace& space,
                                    const EstimateParams& params);

/// Closed sphere only (throws PreconditionError on open models).
EstimateReport check_global_estimate(const Field& u, const NonlinearityFamily& family,
                                     const ModelSpace& space, const EstimateParams& params);

struct HarnackReport {
    double H_const = 0.0;
    double sup_grad_sq = 0.0;
    double grad_bound_slack = 0.0;
    double sup_u = 0.0;
    double inf_u = 0.0;
    double supinf_slack = 0.0;
    /// max over r in B_R of |trapezoid of u'/u on [0, r] - log(u(r)/u(0))|
    double quadrature_error = 0.0;
    double grad_tolerance = 0.0;
    double supinf_tolerance = 0.0;
    bool grad_pass = false;
    bool supinf_pass = false;
    bool pass = false;
};

/// Harnack constant of the local estimate from an already computed bundle.
double harnack_constant(const SupInfBundle& bundle, const EstimateParams& params);

HarnackReport harnack(const Field& u, const NonlinearityFamily& family, const ModelSpace& space,
                      const EstimateParams& params, const SupInfBundle& bundle);

struct LiouvilleReport {
    LiouvilleVerdict conditions;
    double mu = 0.0;
    URange range;
    /// sup |grad u| / u
    double gradient_sup = 0.0;
    /// max |Sigma(u)| over the nodes
    double sigma_at_solution = 0.0;
    double tolerance = 1e-8;
    /// Conclusion applies (conditions hold on the solution's range).
    bool applicable = false;
    bool pass = false;
};

/// Requires the closed sphere, spatially constant Sigma and Ric_f^m >= 0 on
/// the whole model (PreconditionError otherwise).
LiouvilleReport check_liouville(const Field& u, const NonlinearityFamily& family, const ModelSpace& space,
                                const EstimateParams& params, double tolerance = 1e-8);

/// Classification of a failed solve on a Liouville scenario: true when the
/// conditions are certified for some mu and Sigma has no positive zero, so
/// no positive solution can exist and the failure is consistent with that.
bool failure_consistent_with_nonexistence(const NonlinearityFamily& family, const ModelSpace& space);

/// Grid search mu in {1.1, 1.2, ..., 8.0}, eps in {0.05, 0.10, ..., 0.95}
/// minimising local_rhs; ties go to the lexicographically smallest pair.
EstimateParams optimize_params(const Field& u, const NonlinearityFamily& family, const ModelSpace& space,
                               double R);

}  // namespace smm
