#include "smm/estimates.hpp"

#include <algorithm>
#include <cmath>

#include "smm/inequality_kernel.hpp"

namespace smm {

void EstimateParams::validate() const {
    if (!(mu > 1.0)) throw PreconditionError("EstimateParams: mu must exceed 1");
    if (!(eps > 0.0 && eps < 1.0)) throw PreconditionError("EstimateParams: eps must lie in (0, 1)");
    if (!(R > 0.0)) throw PreconditionError("EstimateParams: R must be positive");
    if (!(c1 >= 0.0) || !(c2 >= 0.0)) throw PreconditionError("EstimateParams: cutoff constants must be >= 0");
    if (!(k >= 0.0)) throw PreconditionError("EstimateParams: k must be >= 0");
    if (!(m >= 2.0)) throw PreconditionError("EstimateParams: m must be >= 2");
    if (!(c_tol >= 0.0)) throw PreconditionError("EstimateParams: c_tol must be >= 0");
}

namespace {

const CutoffProfile& cached_cutoff() {
    static const CutoffProfile profile = quintic_cutoff();
    return profile;
}

double positive_part(double x) { return x > 0.0 ? x : 0.0; }
double negative_part(double x) { return x < 0.0 ? x : 0.0; }

void require_positive_field(const Field& u, const char* what) {
    if (!u.positive()) throw PositivityError(std::string(what) + ": u must be positive");
}

std::size_t outer_last_index(const Field& u, const ModelSpace& space, const EstimateParams& params,
                             bool global) {
    if (global) return u.size() - 1;
    if (2.0 * params.R > space.r_max() * (1.0 + 1e-12))
        throw PreconditionError("estimate: the ball B_2R must fit inside the domain");
    return u.grid().last_index_within(2.0 * params.R);
}

// (c2 + (m-1) c1 (1 + R sqrt k) + 2 c1^2) + m c1^2 mu^2 / (4 (mu - 1))
double geometric_bracket(const EstimateParams& p) {
    return (p.c2 + (p.m - 1.0) * p.c1 * (1.0 + p.R * std::sqrt(p.k)) + 2.0 * p.c1 * p.c1) +
           p.m * p.c1 * p.c1 * p.mu * p.mu / (4.0 * (p.mu - 1.0));
}

// m mu^2 A^2/((1-eps)(mu-1)^2) + (27 m mu^2 B^4/(4 eps (mu-1)^2))^{1/3} + 2 mu C
double nonlinear_bracket(const SupInfBundle& b, const EstimateParams& p) {
    const double mu2 = p.mu * p.mu;
    const double mm1sq = (p.mu - 1.0) * (p.mu - 1.0);
    const double b4 = b.B_sigma * b.B_sigma * b.B_sigma * b.B_sigma;
    return p.m * mu2 * b.A_sigma * b.A_sigma / ((1.0 - p.eps) * mm1sq) +
           std::cbrt(27.0 * p.m * mu2 * b4 / (4.0 * p.eps * mm1sq)) + 2.0 * p.mu * b.C_sigma;
}

EstimateReport check_estimate(const Field& u, const NonlinearityFamily& family, const ModelSpace& space,
                              const EstimateParams& params, bool global) {
    params.validate();
    require_positive_field(u, "check_estimate");
    EstimateReport report{Field(u.grid()), 0, 0.0, {}, {}};
    report.bundle = sup_inf_bundle(u, family, space, params, global);
    report.breakdown = global ? global_rhs(report.bundle, params) : local_rhs(report.bundle, params);
    report.rhs = report.breakdown.total;
    report.region_last = report.bundle.inner_last;
    report.h = u.grid().h();
    report.tolerance = params.c_tol * report.h * report.h * (1.0 + std::abs(report.rhs));

    const Field du = derivative(u);
    report.max_lhs = -INFINITY;
    for (std::size_t i = 0; i <= report.region_last; ++i) {
        const double r = u.grid().node(i);
        const double g = du[i] / u[i];
        report.lhs[i] = g * g / params.mu + sigma_value(family, r, u[i]) / u[i];
        if (report.lhs[i] > report.max_lhs) {
            report.max_lhs = report.lhs[i];
            report.witness_r = r;
        }
    }
    report.min_slack = report.rhs - report.max_lhs;
    report.pass = report.min_slack >= -report.tolerance;
    return report;
}

}  // namespace

EstimateParams default_params(const ModelSpace& space, double R, double mu, double eps) {
    EstimateParams p;
    p.mu = mu;
    p.eps = eps;
    p.R = R;
    p.c1 = cached_cutoff().c1;
    p.c2 = cached_cutoff().c2;
    p.m = space.m();
    p.k = curvature_lower_bound(space, std::min(2.0 * R, space.r_max()));
    p.validate();
    return p;
}

SupInfBundle sup_inf_bundle(const Field& u, const NonlinearityFamily& family, const ModelSpace& space,
                            const EstimateParams& params, bool global) {
    params.validate();
    require_positive_field(u, "sup_inf_bundle");
    SupInfBundle b;
    b.outer_last = outer_last_index(u, space, params, global);
    b.inner_last = global ? u.size() - 1 : u.grid().last_index_within(params.R);

    const double mu = params.mu;
    for (std::size_t i = 0; i <= b.outer_last; ++i) {
        const double r = u.grid().node(i);
        const double v = u[i];
        const SigmaJet j = sigma_jet(family, r, v);
        const double a_term =
            (2.0 * (params.m - 1.0) * params.k * v + positive_part(-j.sigma + v * j.sigma_u - mu * v * v * j.sigma_uu)) /
            (2.0 * v);
        const double b_term = std::abs(j.sigma_x - mu * v * j.sigma_xu) / v;
        const double c_term = positive_part(-sigma_x_drift_laplacian(family, space, r, v)) / v;
        const double growth = positive_part(v * j.sigma_u - j.sigma) / v;
        b.A_sigma = std::max(b.A_sigma, a_term);
        b.B_sigma = std::max(b.B_sigma, b_term);
        b.C_sigma = std::max(b.C_sigma, c_term);
        b.sup_growth = std::max(b.sup_growth, growth);
        if (i <= b.inner_last) b.inf_neg_sigma = std::min(b.inf_neg_sigma, negative_part(j.sigma) / v);
    }
    return b;
}

RhsBreakdown local_rhs(const SupInfBundle& bundle, const EstimateParams& params) {
    params.validate();
    RhsBreakdown out;
    out.geometric = params.m * params.mu / (2.0 * params.R * params.R) * geometric_bracket(params);
    out.nonlinear = std::sqrt(params.m) / 2.0 * std::sqrt(nonlinear_bracket(bundle, params));
    out.growth = params.m * params.mu / 2.0 * bundle.sup_growth;
    out.total = out.geometric + out.nonlinear + out.growth;
    return out;
}

RhsBreakdown global_rhs(const SupInfBundle& bundle, const EstimateParams& params) {
    params.validate();
    RhsBreakdown out;
    out.nonlinear = std::sqrt(params.m) / 2.0 * std::sqrt(nonlinear_bracket(bundle, params));
    out.growth = params.m * params.mu / 2.0 * bundle.sup_growth;
    out.total = out.nonlinear + out.growth;
    return out;
}

EstimateReport check_local_estimate(const Field& u, const NonlinearityFamily& family, const ModelSpace& space,
                                    const EstimateParams& params) {
    return check_estimate(u, family, space, params, false);
}

EstimateReport check_global_estimate(const Field& u, const NonlinearityFamily& family,
                                     const ModelSpace& space, const EstimateParams& params) {
    if (!space.closed())
        throw PreconditionError("check_global_estimate: only the closed sphere has no boundary");
    return check_estimate(u, family, space, params, true);
}

double harnack_constant(const SupInfBundle& bundle, const EstimateParams& params) {
    params.validate();
    const double mu = params.mu;
    const double m = params.m;
    return m * mu * mu * geometric_bracket(params) / (2.0 * params.R * params.R) +
           std::sqrt(m) * mu / 2.0 * std::sqrt(nonlinear_bracket(bundle, params)) +
           m * mu * mu * bundle.sup_growth / 2.0 - mu * bundle.inf_neg_sigma;
}

HarnackReport harnack(const Field& u, const NonlinearityFamily& family, const ModelSpace& space,
                      const EstimateParams& params, const SupInfBundle& bundle) {
    params.validate();
    require_positive_field(u, "harnack");
    (void)family;
    (void)space;
    HarnackReport rep;
    rep.H_const = harnack_constant(bundle, params);

    const double h = u.grid().h();
    const Field du = derivative(u);
    const std::size_t last = bundle.inner_last;
    rep.sup_u = u[0];
    rep.inf_u = u[0];
    double integral = 0.0;
    double prev = du[0] / u[0];
    for (std::size_t i = 0; i <= last; ++i) {
        const double q = du[i] / u[i];
        rep.sup_grad_sq = std::max(rep.sup_grad_sq, q * q);
        rep.sup_u = std::max(rep.sup_u, u[i]);
        rep.inf_u = std::min(rep.inf_u, u[i]);
        if (i > 0) integral += 0.5 * h * (prev + q);
        prev = q;
        rep.quadrature_error = std::max(rep.quadrature_error, std::abs(integral - std::log(u[i] / u[0])));
    }

    rep.grad_bound_slack = rep.H_const - rep.sup_grad_sq;
    rep.supinf_slack = std::exp(2.0 * params.R * std::sqrt(rep.H_const)) * rep.inf_u - rep.sup_u;
    rep.grad_tolerance = params.c_tol * h * h * (1.0 + std::abs(rep.H_const));
    rep.supinf_tolerance = params.c_tol * h * h * (1.0 + rep.sup_u);
    rep.grad_pass = rep.grad_bound_slack >= -rep.grad_tolerance;
    rep.supinf_pass = rep.supinf_slack >= -rep.supinf_tolerance;
    rep.pass = rep.grad_pass && rep.supinf_pass;
    return rep;
}

LiouvilleReport check_liouville(const Field& u, const NonlinearityFamily& family, const ModelSpace& space,
                                const EstimateParams& params, double tolerance) {
    if (!space.closed()) throw PreconditionError("check_liouville: requires the closed sphere");
    if (!is_spatially_constant(family)) throw PreconditionError("check_liouville: Sigma must not depend on x");
    if (curvature_lower_bound(space, space.r_max()) > 0.0)
        throw PreconditionError("check_liouville: Ric_f^m is not nonnegative on the model");
    require_positive_field(u, "check_liouville");

    LiouvilleReport rep;
    rep.mu = params.mu;
    rep.tolerance = tolerance;
    const auto values = u.values();
    rep.range = {*std::min_element(values.begin(), values.end()), *std::max_element(values.begin(), values.end())};
    rep.conditions = liouville_conditions(family, params.mu, rep.range);
    rep.applicable = rep.conditions.kind == VerdictKind::holds;

    const Field du = derivative(u);
    for (std::size_t i = 0; i < u.size(); ++i) {
        rep.gradient_sup = std::max(rep.gradient_sup, std::abs(du[i]) / u[i]);
        rep.sigma_at_solution = std::max(rep.sigma_at_solution, std::abs(sigma_value(family, u.grid().node(i), u[i])));
    }
    rep.pass = !rep.applicable || (rep.gradient_sup <= tolerance && rep.sigma_at_solution <= tolerance);
    return rep;
}

bool failure_consistent_with_nonexistence(const NonlinearityFamily& family, const ModelSpace& space) {
    if (!space.closed() || !is_spatially_constant(family)) return false;
    if (curvature_lower_bound(space, space.r_max()) > 0.0) return false;
    const auto found = liouville_mu_search(family);
    return found && found->verdict.kind == VerdictKind::holds && has_no_positive_zeros(family);
}

EstimateParams optimize_params(const Field& u, const NonlinearityFamily& family, const ModelSpace& space,
                               double R) {
    EstimateParams best = default_params(space, R);
    double best_rhs = INFINITY;
    for (int i = 0; i <= 69; ++i) {
        EstimateParams p = best;
        p.mu = (11 + i) / 10.0;
        p.eps = 0.05;
        const SupInfBundle bundle = sup_inf_bundle(u, family, space, p);
        for (int j = 1; j <= 19; ++j) {
            p.eps = j / 20.0;
            const double rhs = local_rhs(bundle, p).total;
            if (rhs < best_rhs) {
                best_rhs = rhs;
                best.mu = p.mu;
                best.eps = p.eps;
            }
        }
    }
    return best;
}

}  // namespace smm
