#include "smm/model_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace smm {

namespace profiles {

ScalarFn constant(double c) {
    ScalarFn fn;
    std::ostringstream label;
    label << "constant(" << c << ")";
    fn.label = label.str();
    fn.value = [c](double) { return c; };
    fn.d1 = [](double) { return 0.0; };
    fn.d2 = [](double) { return 0.0; };
    fn.d3 = [](double) { return 0.0; };
    fn.constant = true;
    return fn;
}

ScalarFn linear() {
    return {"r", [](double r) { return r; }, [](double) { return 1.0; },
            [](double) { return 0.0; }, [](double) { return 0.0; }, false};
}

ScalarFn sine() {
    return {"sin(r)", [](double r) { return std::sin(r); }, [](double r) { return std::cos(r); },
            [](double r) { return -std::sin(r); }, [](double r) { return -std::cos(r); }, false};
}

ScalarFn hyperbolic_sine() {
    return {"sinh(r)", [](double r) { return std::sinh(r); },
            [](double r) { return std::cosh(r); }, [](double r) { return std::sinh(r); },
            [](double r) { return std::cosh(r); }, false};
}

ScalarFn gaussian(double alpha) {
    if (alpha == 0.0) return constant(0.0);
    std::ostringstream label;
    label << alpha << "*r^2";
    return {label.str(), [alpha](double r) { return alpha * r * r; },
            [alpha](double r) { return 2.0 * alpha * r; }, [alpha](double) { return 2.0 * alpha; },
            [](double) { return 0.0; }, false};
}

ScalarFn polynomial(std::vector<double> coeffs) {
    while (!coeffs.empty() && coeffs.back() == 0.0) coeffs.pop_back();
    if (coeffs.size() <= 1) return constant(coeffs.empty() ? 0.0 : coeffs.front());

    // Horner evaluation of the j-th derivative.
    auto derivative = [coeffs](int order) {
        return [coeffs, order](double r) {
            double acc = 0.0;
            for (std::size_t k = coeffs.size(); k-- > static_cast<std::size_t>(order);) {
                double falling = 1.0;
                for (int j = 0; j < order; ++j) falling *= static_cast<double>(k - j);
                acc = acc * r + falling * coeffs[k];
            }
            return acc;
        };
    };
    std::ostringstream label;
    label << "poly(";
    for (std::size_t k = 0; k < coeffs.size(); ++k) label << (k ? "," : "") << coeffs[k];
    label << ")";
    return {label.str(), derivative(0), derivative(1), derivative(2), derivative(3), false};
}

ScalarFn cosine(double c0, double c1) {
    if (c1 == 0.0) return constant(c0);
    std::ostringstream label;
    label << c0 << "+" << c1 << "*cos(r)";
    return {label.str(), [c0, c1](double r) { return c0 + c1 * std::cos(r); },
            [c1](double r) { return -c1 * std::sin(r); },
            [c1](double r) { return -c1 * std::cos(r); },
            [c1](double r) { return c1 * std::sin(r); }, false};
}

ScalarFn quadratic(double c0, double c2) {
    if (c2 == 0.0) return constant(c0);
    std::ostringstream label;
    label << c0 << "+" << c2 << "*r^2";
    return {label.str(), [c0, c2](double r) { return c0 + c2 * r * r; },
            [c2](double r) { return 2.0 * c2 * r; }, [c2](double) { return 2.0 * c2; },
            [](double) { return 0.0; }, false};
}

ScalarFn exponential(double a, double b) {
    std::ostringstream label;
    label << a << "*exp(" << b << "*s)";
    return {label.str(), [a, b](double s) { return a * std::exp(b * s); },
            [a, b](double s) { return a * b * std::exp(b * s); },
            [a, b](double s) { return a * b * b * std::exp(b * s); },
            [a, b](double s) { return a * b * b * b * std::exp(b * s); }, a == 0.0 || b == 0.0};
}

}  // namespace profiles

const char* to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::euclidean: return "euclidean";
        case ModelKind::hyperbolic: return "hyperbolic";
        case ModelKind::spherical: return "spherical";
        case ModelKind::custom: return "custom";
    }
    return "unknown";
}

namespace {

constexpr double kPoleTol = 1e-12;

bool near(double a, double b, double tol = 1e-10) {
    return std::abs(a - b) <= tol * (1.0 + std::abs(b));
}

}  // namespace

ModelSpace::ModelSpace(ModelKind kind, int n, double m, ScalarFn warp, ScalarFn weight,
                       double r_max, double pole_curvature)
    : kind_(kind),
      n_(n),
      m_(m),
      warp_(std::move(warp)),
      weight_(std::move(weight)),
      r_max_(r_max),
      pole_curvature_(pole_curvature),
      closed_(false) {
    if (n_ < 2) throw PreconditionError("model space: dimension n must be >= 2");
    if (!std::isfinite(m_) || m_ < n_)
        throw PreconditionError("model space: synthetic dimension must satisfy n <= m < inf");
    if (!warp_.value || !warp_.d1 || !warp_.d2)
        throw PreconditionError("model space: warp profile must supply value, d1 and d2");
    if (!weight_.value || !weight_.d1 || !weight_.d2)
        throw PreconditionError("model space: weight profile must supply value, d1 and d2");
    if (m_ == n_ && !weight_.constant)
        throw PreconditionError("model space: m = n requires a constant weight");
    if (!(r_max_ > 0.0) || !std::isfinite(r_max_))
        throw PreconditionError("model space: r_max must be positive and finite");
    if (kind_ == ModelKind::spherical) {
        if (r_max_ > std::numbers::pi + kPoleTol)
            throw PreconditionError("model space: spherical r_max must not exceed pi");
        closed_ = near(r_max_, std::numbers::pi, 1e-12);
        if (closed_) r_max_ = std::numbers::pi;
    }
    if (!near(warp_.value(0.0), 0.0) || !near(warp_.d1(0.0), 1.0))
        throw PreconditionError("model space: warp must satisfy warp(0) = 0, warp'(0) = 1");
    if (!near(weight_.d1(0.0), 0.0))
        throw PreconditionError("model space: weight must satisfy f'(0) = 0");
    if (closed_ && !near(weight_.d1(r_max_), 0.0, 1e-9))
        throw PreconditionError("model space: closed model needs f'(pi) = 0");

    const int samples = 1000;
    const double upper = closed_ ? r_max_ * (1.0 - 1e-6) : r_max_;
    for (int i = 1; i <= samples; ++i) {
        const double r = upper * i / samples;
        if (!(warp_.value(r) > 0.0))
            throw PreconditionError("model space: warp must be positive on (0, r_max)");
    }
}

ModelSpace ModelSpace::euclidean(int n, double m, ScalarFn weight, double r_max) {
    return ModelSpace(ModelKind::euclidean, n, m, profiles::linear(), std::move(weight), r_max, 0.0);
}

ModelSpace ModelSpace::hyperbolic(int n, double m, ScalarFn weight, double r_max) {
    return ModelSpace(ModelKind::hyperbolic, n, m, profiles::hyperbolic_sine(), std::move(weight),
                      r_max, -1.0);
}

ModelSpace ModelSpace::spherical(int n, double m, ScalarFn weight, double r_max) {
    return ModelSpace(ModelKind::spherical, n, m, profiles::sine(), std::move(weight), r_max, 1.0);
}

bool ModelSpace::is_pole(double r) const {
    if (std::abs(r) <= kPoleTol) return true;
    return closed_ && std::abs(r - r_max_) <= kPoleTol * (1.0 + r_max_);
}

std::string ModelSpace::describe() const {
    std::ostringstream os;
    os << to_string(kind_) << "(n=" << n_ << ", m=" << m_ << ", warp=" << warp_.label
       << ", f=" << weight_.label << ", r_max=" << r_max_ << (closed_ ? ", closed" : "") << ")";
    return os.str();
}

namespace {

void require_in_domain(const ModelSpace& space, double r, const char* what) {
    if (space.is_pole(r)) throw PoleError(std::string(what) + ": undefined at a pole, use the limit");
    if (r < 0.0 || r > space.r_max() * (1.0 + 1e-14))
        throw std::domain_error(std::string(what) + ": radius outside [0, r_max]");
}

// f'^2 / (m - n), read as 0 for the constant-weight m = n convention.
double weight_gradient_term(const ModelSpace& space, double df) {
    if (!space.weighted()) return 0.0;
    return df * df / (space.m() - space.n());
}

}  // namespace

RicciEigenvalues ricci_fm_eigenvalues(const ModelSpace& space, double r) {
    require_in_domain(space, r, "ricci_fm_eigenvalues");
    const double n = space.n();
    const double phi = space.warp().value(r);
    const double dphi = space.warp().d1(r);
    const double ddphi = space.warp().d2(r);
    const double df = space.weight().d1(r);
    const double ddf = space.weight().d2(r);

    RicciEigenvalues ev;
    ev.radial = -(n - 1.0) * ddphi / phi + ddf - weight_gradient_term(space, df);
    // (1 - warp'^2) / warp^2 is the tangential sectional curvature.
    const double sectional = space.kind() == ModelKind::custom ? (1.0 - dphi) * (1.0 + dphi) / (phi * phi)
                                                                : space.pole_curvature();
    ev.tangential = -ddphi / phi + (n - 2.0) * sectional + dphi * df / phi;
    return ev;
}

RicciEigenvalues ricci_fm_pole_limit(const ModelSpace& space, bool far_pole) {
    if (far_pole && !space.closed())
        throw std::domain_error("ricci_fm_pole_limit: open model has no far pole");
    const double r = far_pole ? space.r_max() : 0.0;
    // Ric -> (n-1) K_pole; Hess f -> f''(pole) in every direction; df -> 0.
    const double value = (space.n() - 1.0) * space.pole_curvature() + space.weight().d2(r);
    return {value, value};
}

RicciEigenvalues ricci_fm_eigenvalues_or_limit(const ModelSpace& space, double r) {
    if (std::abs(r) <= kPoleTol) return ricci_fm_pole_limit(space, false);
    if (space.closed() && space.is_pole(r)) return ricci_fm_pole_limit(space, true);
    return ricci_fm_eigenvalues(space, r);
}

double curvature_lower_bound(const ModelSpace& space, double radius, int resolution) {
    if (!(radius > 0.0) || radius > space.r_max() * (1.0 + 1e-12))
        throw PreconditionError("curvature_lower_bound: radius must lie in (0, r_max]");
    if (resolution < 1) throw PreconditionError("curvature_lower_bound: resolution must be >= 1");
    radius = std::min(radius, space.r_max());
    double lowest = ricci_fm_pole_limit(space).min();
    for (int i = 1; i <= resolution; ++i) {
        const double r = radius * i / resolution;
        lowest = std::min(lowest, ricci_fm_eigenvalues_or_limit(space, r).min());
    }
    return std::max(0.0, -lowest / (space.m() - 1.0));
}

double drift_laplacian_radial(const ModelSpace& space, double r) {
    require_in_domain(space, r, "drift_laplacian_radial");
    return (space.n() - 1.0) * space.warp().d1(r) / space.warp().value(r) - space.weight().d1(r);
}

double comparison_bound(double m, double k, double r) {
    if (!(r > 0.0)) throw PoleError("comparison_bound: r must be positive");
    if (k < 0.0) throw PreconditionError("comparison_bound: k must be nonnegative");
    if (k == 0.0) return (m - 1.0) / r;
    const double s = std::sqrt(k);
    return (m - 1.0) * s / std::tanh(s * r);
}

double comparison_check(const ModelSpace& space, double k, double r, int resolution) {
    require_in_domain(space, r, "comparison_check");
    const double needed = curvature_lower_bound(space, r, resolution);
    if (needed > k + 1e-9 * (1.0 + k))
        throw PreconditionError("comparison_check: supplied k is below the curvature lower bound");
    return comparison_bound(space.m(), k, r) - drift_laplacian_radial(space, r);
}

}  // namespace smm
