#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "smm/nonlinearity.hpp"

namespace smm {
namespace {

NonlinearityFamily power(std::vector<std::pair<double, double>> terms) {
    PowerSum ps;
    for (auto [p, a] : terms) ps.terms.push_back({profiles::constant(p), a});
    return ps;
}

TEST(SigmaJet, LinearTerm) {
    const auto j = sigma_jet(power({{1.0, 1.0}}), 0.7, 3.0);
    EXPECT_DOUBLE_EQ(j.sigma, 3.0);
    EXPECT_DOUBLE_EQ(j.sigma_u, 1.0);
    EXPECT_DOUBLE_EQ(j.sigma_uu, 0.0);
    EXPECT_DOUBLE_EQ(j.sigma_x, 0.0);
    EXPECT_DOUBLE_EQ(j.sigma_xu, 0.0);
}

TEST(SigmaJet, SquareRoot) {
    const auto j = sigma_jet(power({{1.0, 0.5}}), 0.0, 4.0);
    EXPECT_DOUBLE_EQ(j.sigma, 2.0);
    EXPECT_DOUBLE_EQ(j.sigma_u, 0.25);
    EXPECT_DOUBLE_EQ(j.sigma_uu, -1.0 / 32.0);
}

TEST(SigmaJet, ULogU) {
    const NonlinearityFamily f = LogGamma{profiles::constant(1.0), profiles::linear(), profiles::constant(0.0), 2.0};
    const double e = std::exp(1.0);
    const auto j = sigma_jet(f, 0.3, e);
    EXPECT_NEAR(j.sigma, e, 1e-15);
    EXPECT_NEAR(j.sigma_u, 2.0, 1e-15);
    EXPECT_NEAR(j.sigma_uu, 1.0 / e, 1e-15);
}

TEST(SigmaJet, RejectsNonpositiveU) {
    const auto f = power({{1.0, 0.5}});
    EXPECT_THROW(sigma_jet(f, 0.1, 0.0), PositivityError);
    EXPECT_THROW(sigma_jet(f, 0.1, -1.0), PositivityError);
    EXPECT_THROW(sigma_value(f, 0.1, 0.0), PositivityError);
}

ScalarFn random_profile(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> c(-1.0, 1.0);
    switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
        case 0:
            return profiles::constant(c(rng));
        case 1:
            return profiles::quadratic(c(rng), c(rng));
        case 2:
            return profiles::cosine(c(rng), c(rng));
        default:
            return profiles::polynomial({c(rng), 0.0, c(rng), c(rng)});
    }
}

NonlinearityFamily random_family(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> expo(-1.5, 2.5);
    switch (std::uniform_int_distribution<int>(0, 2)(rng)) {
        case 0: {
            PowerSum ps;
            const int terms = std::uniform_int_distribution<int>(1, 3)(rng);
            for (int t = 0; t < terms; ++t) ps.terms.push_back({random_profile(rng), expo(rng)});
            return ps;
        }
        case 1: {
            std::uniform_real_distribution<double> c(-1.0, 1.0);
            ScalarFn gamma = std::uniform_int_distribution<int>(0, 1)(rng) == 0
                                 ? profiles::polynomial({c(rng), c(rng), c(rng)})
                                 : profiles::exponential(c(rng), c(rng));
            return LogGamma{random_profile(rng), gamma, random_profile(rng), expo(rng)};
        }
        default:
            return Lichnerowicz{random_profile(rng), random_profile(rng), random_profile(rng),
                                random_profile(rng), expo(rng), expo(rng)};
    }
}

void expect_close(double analytic, double fd, const char* what, const std::string& ctx) {
    EXPECT_NEAR(analytic, fd, 1e-6 * (1.0 + std::abs(fd))) << what << " " << ctx;
}

TEST(SigmaJet, PartialsMatchCentralDifferences) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> rr(0.1, 2.0);
    std::uniform_real_distribution<double> lu(std::log(0.1), std::log(10.0));
    const double step = 1e-5;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto f = random_family(rng);
        const double r = rr(rng);
        const double u = std::exp(lu(rng));
        const std::string ctx = describe(f) + " r=" + std::to_string(r) + " u=" + std::to_string(u);
        const auto j = sigma_jet(f, r, u);
        const double du = step * u;
        expect_close(j.sigma_u, (sigma_value(f, r, u + du) - sigma_value(f, r, u - du)) / (2.0 * du), "sigma_u", ctx);
        expect_close(j.sigma_uu, (sigma_jet(f, r, u + du).sigma_u - sigma_jet(f, r, u - du).sigma_u) / (2.0 * du),
                     "sigma_uu", ctx);
        expect_close(j.sigma_x, (sigma_value(f, r + step, u) - sigma_value(f, r - step, u)) / (2.0 * step), "sigma_x",
                     ctx);
        expect_close(j.sigma_xu,
                     (sigma_jet(f, r + step, u).sigma_u - sigma_jet(f, r - step, u).sigma_u) / (2.0 * step),
                     "sigma_xu", ctx);
        expect_close(j.sigma_xx,
                     (sigma_jet(f, r + step, u).sigma_x - sigma_jet(f, r - step, u).sigma_x) / (2.0 * step),
                     "sigma_xx", ctx);
    }
}

TEST(SigmaDriftLaplacian, ZeroForConstantCoefficients) {
    const auto space = ModelSpace::euclidean(3, 6, profiles::gaussian(0.5), 2.0);
    const NonlinearityFamily fams[] = {
        power({{1.0, 0.5}, {-2.0, 3.0}}),
        LogGamma{profiles::constant(0.3), profiles::exponential(1.0, -0.5), profiles::constant(-1.0), 0.5},
        Lichnerowicz{profiles::constant(1.0), profiles::constant(-0.5), profiles::constant(0.1),
                     profiles::constant(0.2), 0.5, -1.0}};
    for (const auto& f : fams) {
        EXPECT_TRUE(is_spatially_constant(f));
        for (double r : {0.0, 0.4, 1.9})
            for (double u : {0.01, 1.0, 50.0}) EXPECT_EQ(sigma_x_drift_laplacian(f, space, r, u), 0.0);
    }
}

TEST(SigmaDriftLaplacian, QuadraticCoefficientGivesTwoN) {
    // Sigma = r^2 u on flat space: Delta(r^2) = 2n, also at the pole.
    for (int n : {2, 3, 5}) {
        const auto space = ModelSpace::euclidean(n, n, profiles::constant(0.0), 2.0);
        PowerSum ps;
        ps.terms.push_back({profiles::quadratic(0.0, 1.0), 1.0});
        EXPECT_FALSE(is_spatially_constant(ps));
        for (double r : {0.0, 0.3, 1.7})
            EXPECT_NEAR(sigma_x_drift_laplacian(ps, space, r, 1.5), 2.0 * n * 1.5, 1e-12) << "n=" << n << " r=" << r;
    }
}

TEST(LiouvilleConditions, SpecExamples) {
    const auto sqrt_u = power({{1.0, 0.5}});
    EXPECT_EQ(liouville_conditions(sqrt_u, 1.5).kind, VerdictKind::holds);
    EXPECT_EQ(liouville_conditions(sqrt_u, 1.5, {0.5, 2.0}).kind, VerdictKind::holds);

    const auto v = liouville_conditions(power({{1.0, 2.0}}), 2.0);
    EXPECT_EQ(v.kind, VerdictKind::fails);
    EXPECT_EQ(v.failed_condition, 2);
    EXPECT_GT(v.witness_value, 0.0);

    // Sigma = u - 1 is negative below u = 1.
    const auto shifted = liouville_conditions(power({{1.0, 1.0}, {-1.0, 0.0}}), 1.5);
    EXPECT_EQ(shifted.kind, VerdictKind::fails);
    EXPECT_EQ(shifted.failed_condition, 1);
    EXPECT_LT(shifted.witness_u, 1.0);

    // p >= 0 and a <= 1 with mu inside the window 1 < mu < 1/a.
    EXPECT_EQ(liouville_conditions(power({{2.0, 0.25}, {1.0, -1.0}, {0.5, 1.0}}), 1.5).kind, VerdictKind::holds);
}

TEST(LiouvilleConditions, NonPowerFamiliesAreNeverCertified) {
    const NonlinearityFamily lg =
        LogGamma{profiles::constant(1.0), profiles::exponential(1.0, -1.0), profiles::constant(0.0), 0.5};
    const auto v = liouville_conditions(lg, 1.5);
    EXPECT_NE(v.kind, VerdictKind::holds);
}

TEST(LiouvilleConditions, RejectsSpatiallyVaryingCoefficients) {
    PowerSum ps;
    ps.terms.push_back({profiles::quadratic(1.0, 1.0), 0.5});
    EXPECT_THROW(liouville_conditions(ps, 1.5), PreconditionError);
}

/// Independent dense-grid oracle for the three sign conditions of a PowerSum.
bool grid_conditions_hold(const std::vector<std::pair<double, double>>& terms, double mu) {
    for (int i = 0; i <= 2000; ++i) {
        const double u = std::pow(10.0, -3.0 + 6.0 * i / 2000.0);
        double c1 = 0.0, c2 = 0.0, c3 = 0.0, scale = 0.0;
        for (auto [p, a] : terms) {
            const double ua = std::pow(u, a);
            c1 += p * ua;
            c2 += p * (a - 1.0) * ua;
            c3 += p * (a - 1.0) * (mu * a - 1.0) * ua;
            scale += std::abs(p) * ua * (1.0 + std::abs(a)) * (1.0 + mu * std::abs(a));
        }
        const double tol = 1e-12 * scale;
        if (c1 < -tol || c2 > tol || c3 < -tol) return false;
    }
    return true;
}

TEST(LiouvilleConditions, PowerSumAgreesWithGridOracle) {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> coef(-1.0, 2.0);
    std::uniform_real_distribution<double> expo(-1.0, 2.0);
    std::uniform_real_distribution<double> mus(1.05, 4.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::pair<double, double>> terms;
        const int count = std::uniform_int_distribution<int>(1, 3)(rng);
        for (int t = 0; t < count; ++t) terms.emplace_back(coef(rng), expo(rng));
        const double mu = mus(rng);
        const auto verdict = liouville_conditions(power(terms), mu);
        const bool oracle = grid_conditions_hold(terms, mu);
        EXPECT_EQ(oracle, verdict.kind != VerdictKind::fails)
            << describe(power(terms)) << " mu=" << mu << " verdict=" << to_string(verdict.kind);
    }
}

TEST(LiouvilleMuSearch, SpecExamples) {
    const auto found = liouville_mu_search(power({{1.0, 0.5}}));
    ASSERT_TRUE(found.has_value());
    EXPECT_GT(found->mu, 1.0);
    EXPECT_LT(found->mu, 2.0);
    EXPECT_EQ(found->verdict.kind, VerdictKind::holds);

    EXPECT_FALSE(liouville_mu_search(power({{1.0, 2.0}})).has_value());

    const auto zero = liouville_mu_search(PowerSum{});
    ASSERT_TRUE(zero.has_value());
    EXPECT_NEAR(zero->mu, 1.001, 1e-12);
}

TEST(HasNoPositiveZeros, PositiveCoefficientsOnly) {
    EXPECT_TRUE(has_no_positive_zeros(power({{1.0, 0.5}})));
    EXPECT_TRUE(has_no_positive_zeros(power({{1.0, 0.5}, {0.0, 2.0}})));
    EXPECT_FALSE(has_no_positive_zeros(power({{1.0, 1.0}, {-1.0, 0.0}})));
    EXPECT_FALSE(has_no_positive_zeros(PowerSum{}));
}

}  // namespace
}  // namespace smm
