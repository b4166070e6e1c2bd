#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "smm/model_space.hpp"

namespace smm {
namespace {

// Second-order central differences of a scalar profile, used as an oracle
// independent of the closed-form derivatives.
double fd1(const ScalarFn& f, double r, double h) { return (f(r + h) - f(r - h)) / (2.0 * h); }
double fd2(const ScalarFn& f, double r, double h) { return (f(r + h) - 2.0 * f(r) + f(r - h)) / (h * h); }

RicciEigenvalues fd_eigenvalues(const ModelSpace& s, double r, double h) {
    const double n = s.n();
    const double phi = s.warp()(r);
    const double dphi = fd1(s.warp(), r, h);
    const double ddphi = fd2(s.warp(), r, h);
    const double df = fd1(s.weight(), r, h);
    const double ddf = fd2(s.weight(), r, h);
    const double drift = s.weighted() ? df * df / (s.m() - n) : 0.0;
    return {-(n - 1.0) * ddphi / phi + ddf - drift,
            -ddphi / phi + (n - 2.0) * (1.0 - dphi * dphi) / (phi * phi) + dphi * df / phi};
}

std::vector<ModelSpace> catalog() {
    return {ModelSpace::euclidean(3, 3, profiles::constant(0.0), 2.0),
            ModelSpace::euclidean(3, 8, profiles::gaussian(0.5), 2.0),
            ModelSpace::euclidean(2, 5, profiles::polynomial({0.0, 0.0, 0.3, 0.0, 0.05}), 1.5),
            ModelSpace::hyperbolic(3, 3, profiles::constant(0.0), 3.0),
            ModelSpace::hyperbolic(4, 7, profiles::gaussian(0.2), 2.0),
            ModelSpace::spherical(3, 3, profiles::constant(0.0), M_PI),
            ModelSpace::spherical(3, 6, profiles::cosine(0.3, -0.3), M_PI),
            ModelSpace::spherical(2, 4, profiles::gaussian(0.1), 2.0)};
}

TEST(RicciEigenvalues, FlatUnweightedIsZero) {
    const auto s = ModelSpace::euclidean(4, 6, profiles::constant(0.0), 3.0);
    for (double r : {0.1, 1.0, 2.9}) {
        const auto ev = ricci_fm_eigenvalues(s, r);
        EXPECT_DOUBLE_EQ(ev.radial, 0.0);
        EXPECT_DOUBLE_EQ(ev.tangential, 0.0);
    }
}

TEST(RicciEigenvalues, HyperbolicEqualsMinusNMinusOne) {
    for (int n : {2, 3, 5}) {
        const auto s = ModelSpace::hyperbolic(n, n, profiles::constant(0.0), 4.0);
        for (double r : {1e-6, 0.01, 0.5, 3.9}) {
            const auto ev = ricci_fm_eigenvalues(s, r);
            EXPECT_NEAR(ev.radial, -(n - 1.0), 1e-12) << "r=" << r;
            EXPECT_NEAR(ev.tangential, -(n - 1.0), 1e-12) << "r=" << r;
        }
    }
}

TEST(RicciEigenvalues, GaussianWeightClosedForm) {
    // f = r^2/2: radial = 1 - r^2/(m-n), tangential = 1.
    const auto s = ModelSpace::euclidean(3, 8, profiles::gaussian(0.5), 3.0);
    for (double r : {0.25, 1.0, 1.5, 2.75}) {
        const auto ev = ricci_fm_eigenvalues(s, r);
        EXPECT_NEAR(ev.radial, 1.0 - r * r / 5.0, 1e-14);
        EXPECT_NEAR(ev.tangential, 1.0, 1e-14);
    }
}

TEST(RicciEigenvalues, AgreeWithFiniteDifferencesAtSecondOrder) {
    for (const auto& s : catalog()) {
        for (double frac : {0.17, 0.43, 0.71}) {
            const double r = frac * s.r_max();
            const auto exact = ricci_fm_eigenvalues(s, r);
            double prev = 0.0;
            for (double h : {1e-2, 5e-3}) {
                const auto fd = fd_eigenvalues(s, r, h);
                const double err = std::abs(fd.radial - exact.radial) + std::abs(fd.tangential - exact.tangential);
                EXPECT_LT(err, 1e-3) << s.describe() << " r=" << r;
                if (prev > 1e-9) {
                    EXPECT_NEAR(prev / err, 4.0, 0.5) << s.describe() << " r=" << r;
                }
                prev = err;
            }
        }
    }
}

TEST(RicciEigenvalues, PoleIsRejectedAndLimitIsContinuous) {
    for (const auto& s : catalog()) {
        EXPECT_THROW(ricci_fm_eigenvalues(s, 0.0), PoleError);
        const auto limit = ricci_fm_pole_limit(s);
        const auto near = ricci_fm_eigenvalues(s, 1e-4);
        EXPECT_NEAR(near.radial, limit.radial, 1e-6) << s.describe();
        EXPECT_NEAR(near.tangential, limit.tangential, 1e-6) << s.describe();
        if (s.closed()) {
            EXPECT_THROW(ricci_fm_eigenvalues(s, M_PI), PoleError);
            const auto far = ricci_fm_pole_limit(s, true);
            const auto before = ricci_fm_eigenvalues(s, M_PI - 1e-4);
            EXPECT_NEAR(before.min(), far.min(), 1e-6) << s.describe();
        }
    }
}

TEST(CurvatureLowerBound, SpecExamples) {
    EXPECT_EQ(curvature_lower_bound(ModelSpace::euclidean(3, 3, profiles::constant(0.0), 2.0), 2.0), 0.0);
    EXPECT_NEAR(curvature_lower_bound(ModelSpace::hyperbolic(3, 3, profiles::constant(0.0), 2.0), 2.0), 1.0, 1e-14);
    // m - n = 4 R2^2 keeps 1 - r^2/(m-n) >= 0 on [0, R2].
    const double R2 = 1.0;
    EXPECT_EQ(curvature_lower_bound(ModelSpace::euclidean(3, 3 + 4 * R2 * R2, profiles::gaussian(0.5), 2.0), R2), 0.0);
}

TEST(CurvatureLowerBound, GaussianWeightNegativeRegion) {
    // min over [0, R2] of 1 - r^2/(m-n) is 1 - R2^2/(m-n); here m - n = 1/2, R2 = 1.
    const auto s = ModelSpace::euclidean(3, 3.5, profiles::gaussian(0.5), 2.0);
    EXPECT_NEAR(curvature_lower_bound(s, 1.0), (1.0 / 0.5 - 1.0) / 2.5, 1e-12);
}

TEST(CurvatureLowerBound, MonotoneInRadius) {
    for (const auto& s : catalog()) {
        double prev = 0.0;
        for (int i = 1; i <= 20; ++i) {
            const double k = curvature_lower_bound(s, s.r_max() * i / 20.0);
            EXPECT_GE(k, prev) << s.describe();
            prev = k;
        }
    }
}

TEST(DriftLaplacian, SpecExamples) {
    const int n = 4;
    EXPECT_DOUBLE_EQ(drift_laplacian_radial(ModelSpace::euclidean(n, n, profiles::constant(0.0), 2.0), 1.0), n - 1.0);
    const auto hyp = ModelSpace::hyperbolic(n, n, profiles::constant(0.0), 3.0);
    const auto gauss = ModelSpace::euclidean(n, n + 2, profiles::gaussian(0.5), 3.0);
    for (double r : {0.3, 1.0, 2.5}) {
        EXPECT_NEAR(drift_laplacian_radial(hyp, r), (n - 1.0) / std::tanh(r), 1e-13);
        EXPECT_NEAR(drift_laplacian_radial(gauss, r), (n - 1.0) / r - r, 1e-13);
    }
}

TEST(ComparisonCheck, HyperbolicEquality) {
    const auto s = ModelSpace::hyperbolic(3, 3, profiles::constant(0.0), 5.0);
    for (int i = 1; i <= 100; ++i) EXPECT_NEAR(comparison_check(s, 1.0, 5.0 * i / 100.0), 0.0, 1e-10);
}

TEST(ComparisonCheck, FlatSlackIsDimensionGap) {
    const auto s = ModelSpace::euclidean(3, 3, profiles::constant(0.0), 2.0);
    const auto s7 = ModelSpace::euclidean(3, 7, profiles::constant(0.0), 2.0);
    for (double r : {0.1, 1.0, 2.0}) {
        EXPECT_NEAR(comparison_check(s, 0.0, r), 0.0, 1e-14);
        EXPECT_NEAR(comparison_check(s7, 0.0, r), 4.0 / r, 1e-13);
    }
}

TEST(ComparisonCheck, NonnegativeAcrossCatalog) {
    for (const auto& s : catalog()) {
        const double k = curvature_lower_bound(s, s.r_max());
        const int last = s.closed() ? 199 : 200;
        for (int i = 1; i <= last; ++i) {
            const double r = s.r_max() * i / 200.0;
            const double bound = comparison_bound(s.m(), k, r);
            EXPECT_GE(comparison_check(s, k, r), -1e-10 * (1.0 + std::abs(bound))) << s.describe() << " r=" << r;
        }
    }
}

TEST(ComparisonCheck, RejectsTooSmallK) {
    const auto s = ModelSpace::hyperbolic(3, 3, profiles::constant(0.0), 2.0);
    EXPECT_THROW(comparison_check(s, 0.5, 1.0), PreconditionError);
}

TEST(ComparisonBound, SmallKApproachesFlatLimit) {
    EXPECT_NEAR(comparison_bound(5.0, 1e-12, 0.7), 4.0 / 0.7, 1e-9);
    EXPECT_DOUBLE_EQ(comparison_bound(5.0, 0.0, 0.7), 4.0 / 0.7);
}

TEST(ModelSpaceInvariants, ConstructorRejectsBadData) {
    EXPECT_THROW(ModelSpace::euclidean(1, 2, profiles::constant(0.0), 1.0), PreconditionError);
    EXPECT_THROW(ModelSpace::euclidean(3, 2.5, profiles::constant(0.0), 1.0), PreconditionError);
    EXPECT_THROW(ModelSpace::euclidean(3, 3, profiles::gaussian(0.5), 1.0), PreconditionError);
    EXPECT_THROW(ModelSpace::euclidean(3, 5, profiles::polynomial({0.0, 1.0}), 1.0), PreconditionError);
    EXPECT_THROW(ModelSpace::spherical(3, 3, profiles::constant(0.0), 3.5), PreconditionError);
    // f'(pi) != 0 breaks smoothness at the second pole.
    EXPECT_THROW(ModelSpace::spherical(3, 5, profiles::gaussian(0.5), M_PI), PreconditionError);
    EXPECT_NO_THROW(ModelSpace::spherical(3, 5, profiles::gaussian(0.5), 2.0));
}

TEST(ModelSpaceInvariants, ClosedOnlyForFullSphere) {
    EXPECT_TRUE(ModelSpace::spherical(3, 3, profiles::constant(0.0), M_PI).closed());
    EXPECT_FALSE(ModelSpace::spherical(3, 3, profiles::constant(0.0), 2.0).closed());
    EXPECT_FALSE(ModelSpace::hyperbolic(3, 3, profiles::constant(0.0), 2.0).closed());
}

}  // namespace
}  // namespace smm
