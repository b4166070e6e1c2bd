#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "smm/model_space.hpp"

namespace smm {

/// Domain error for u <= 0 (logarithms and fractional powers need u > 0).
class PositivityError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// One summand p(r) u^a of a power superposition.
struct PowerTerm {
    ScalarFn coef;
    double exponent;
};

/// Sigma = sum_j p_j(r) u^{a_j}.
struct PowerSum {
    std::vector<PowerTerm> terms;
};

/// Sigma = p(r) u gamma(log u) + q(r) u^s.
struct LogGamma {
    ScalarFn p;
    ScalarFn gamma;
    ScalarFn q;
    double s;
};

/// Sigma = p(r) u^alpha + q(r) u^beta + r_coef(r) u log u + h_coef(r) u.
struct Lichnerowicz {
    ScalarFn p;
    ScalarFn q;
    ScalarFn r_coef;
    ScalarFn h_coef;
    double alpha;
    double beta;
};

/// u-independent source Sigma = g(r), used for manufactured solutions.
struct SpatialSource {
    ScalarFn source;
};

using NonlinearityFamily = std::variant<PowerSum, LogGamma, Lichnerowicz, SpatialSource>;

std::string describe(const NonlinearityFamily& family);

/// True when every coefficient profile is constant in r.
bool is_spatially_constant(const NonlinearityFamily& family);

/// Sigma and its partials at one point. `sigma_x` and `sigma_xu` are radial
/// derivatives (the only nonzero components for radial coefficients).
struct SigmaJet {
    double sigma = 0.0;
    double sigma_u = 0.0;
    double sigma_uu = 0.0;
    double sigma_x = 0.0;
    double sigma_xu = 0.0;
    /// Second radial derivative at frozen u; feeds Delta_f Sigma^x.
    double sigma_xx = 0.0;
};

/// Throws PositivityError for u <= 0.
SigmaJet sigma_jet(const NonlinearityFamily& family, double r, double u);

/// Sigma alone (cheaper than the full jet).
double sigma_value(const NonlinearityFamily& family, double r, double u);

/// Delta_f of x -> Sigma(x, u) at frozen u, radial form
/// d_rr Sigma + ((n-1) warp'/warp - f') d_r Sigma, with n d_rr Sigma at poles.
double sigma_x_drift_laplacian(const NonlinearityFamily& family, const ModelSpace& space, double r,
                               double u);

/// Closed interval of positive u values.
struct URange {
    double lo = 1e-3;
    double hi = 1e3;
};

enum class VerdictKind { holds, fails, unknown };

const char* to_string(VerdictKind kind);

/// Outcome of checking Sigma >= 0, u Sigma_u - Sigma <= 0 and
/// mu u^2 Sigma_uu - u Sigma_u + Sigma >= 0 over a u-range.
struct LiouvilleVerdict {
    VerdictKind kind = VerdictKind::unknown;
    /// 1, 2 or 3 for the first violated condition; 0 otherwise.
    int failed_condition = 0;
    double witness_u = 0.0;
    double witness_value = 0.0;
    std::string note;
};

/// Requires spatially constant coefficients (throws PreconditionError
/// otherwise). PowerSum is decided by termwise sign rules; other families
/// are sampled on a dense logarithmic u-grid and never reported as `holds`.
LiouvilleVerdict liouville_conditions(const NonlinearityFamily& family, double mu, URange range = {},
                                      int grid_points = 2001);

struct MuSearchResult {
    double mu;
    LiouvilleVerdict verdict;
};

/// Smallest mu on a logarithmic grid over (1, mu_max] with a `holds`
/// verdict; falls back to the smallest grid-consistent (`unknown`) mu.
std::optional<MuSearchResult> liouville_mu_search(const NonlinearityFamily& family, URange range = {},
                                                  double mu_max = 10.0, int grid_points = 96);

/// True when Sigma is certified to have no zero on (0, inf). Only decided for
/// PowerSum with nonnegative constant coefficients, at least one positive.
bool has_no_positive_zeros(const NonlinearityFamily& family);

}  // namespace smm
