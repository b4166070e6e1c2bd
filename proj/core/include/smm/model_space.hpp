#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace smm {

/// Raised when a radial formula is evaluated exactly at a pole (r = 0, or
/// r = pi on the closed spherical model); callers use the limit path instead.
class PoleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised when an operation's documented precondition does not hold.
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Scalar function of one variable carrying closed-form derivatives.
///
/// `d3` is optional; it is only needed when a manufactured source has to be
/// differentiated twice (warp and weight profiles of the catalog supply it).
struct ScalarFn {
    std::string label;
    std::function<double(double)> value;
    std::function<double(double)> d1;
    std::function<double(double)> d2;
    std::function<double(double)> d3;
    bool constant = false;

    double operator()(double x) const { return value(x); }
};

namespace profiles {

ScalarFn constant(double c);
/// r
ScalarFn linear();
ScalarFn sine();
ScalarFn hyperbolic_sine();
/// alpha * r^2
ScalarFn gaussian(double alpha);
/// sum_k coeffs[k] * r^k
ScalarFn polynomial(std::vector<double> coeffs);
/// c0 + c1 * cos(r); smooth at both poles of the sphere.
ScalarFn cosine(double c0, double c1);
/// c0 + c2 * r^2
ScalarFn quadratic(double c0, double c2);
/// a * exp(b * s)
ScalarFn exponential(double a, double b);

}  // namespace profiles

enum class ModelKind { euclidean, hyperbolic, spherical, custom };

const char* to_string(ModelKind kind);

/// Rotationally symmetric smooth metric measure space
/// g = dr^2 + warp(r)^2 g_sphere, measure e^{-f} dv_g, synthetic dimension m.
///
/// Immutable after construction. The constructor enforces pole smoothness,
/// n <= m < inf, and m > n whenever the weight is not constant.
class ModelSpace {
public:
    /// `pole_curvature` is -warp'''(0), the sectional curvature at the pole.
    ModelSpace(ModelKind kind, int n, double m, ScalarFn warp, ScalarFn weight,
               double r_max, double pole_curvature);

    static ModelSpace euclidean(int n, double m, ScalarFn weight, double r_max);
    static ModelSpace hyperbolic(int n, double m, ScalarFn weight, double r_max);
    /// Closed round sphere (r_max = pi, both poles regular) or a geodesic cap
    /// when r_max < pi.
    static ModelSpace spherical(int n, double m, ScalarFn weight, double r_max);

    ModelKind kind() const { return kind_; }
    int n() const { return n_; }
    double m() const { return m_; }
    const ScalarFn& warp() const { return warp_; }
    const ScalarFn& weight() const { return weight_; }
    double r_max() const { return r_max_; }
    double pole_curvature() const { return pole_curvature_; }
    /// True for the full sphere: no boundary, second pole at r = pi.
    bool closed() const { return closed_; }
    bool weighted() const { return !weight_.constant; }

    /// True when r sits on a pole of this space.
    bool is_pole(double r) const;

    std::string describe() const;

private:
    ModelKind kind_;
    int n_;
    double m_;
    ScalarFn warp_;
    ScalarFn weight_;
    double r_max_;
    double pole_curvature_;
    bool closed_;
};

/// Eigenvalues of Ric_f^m = Ric + Hess f - df (x) df / (m - n) in the radial
/// and tangential directions.
struct RicciEigenvalues {
    double radial;
    double tangential;

    double min() const { return radial < tangential ? radial : tangential; }
};

/// Throws PoleError at a pole and std::domain_error outside [0, r_max].
RicciEigenvalues ricci_fm_eigenvalues(const ModelSpace& space, double r);

/// Continuous limit of the eigenvalues at r = 0 (or at r = pi on the closed
/// sphere when `far_pole` is set). Both eigenvalues coincide there.
RicciEigenvalues ricci_fm_pole_limit(const ModelSpace& space, bool far_pole = false);

/// Eigenvalues with the pole limit substituted at poles.
RicciEigenvalues ricci_fm_eigenvalues_or_limit(const ModelSpace& space, double r);

/// Smallest k >= 0 with Ric_f^m >= -(m-1) k on [0, radius], sampled on a
/// uniform grid of `resolution` intervals.
double curvature_lower_bound(const ModelSpace& space, double radius, int resolution = 4096);

/// First-order coefficient of the radial reduction
/// Delta_f u = u'' + ((n-1) warp'/warp - f') u'.
double drift_laplacian_radial(const ModelSpace& space, double r);

/// Wei-Wylie comparison bound (m-1) sqrt(k) coth(sqrt(k) r), with the k = 0
/// limit (m-1)/r.
double comparison_bound(double m, double k, double r);

/// Signed slack comparison_bound - drift_laplacian_radial. Throws
/// PreconditionError when the curvature bound on [0, r] exceeds k.
double comparison_check(const ModelSpace& space, double k, double r, int resolution = 4096);

}  // namespace smm
