// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "smm/estimates.hpp"
#include "smm/grid_ops.hpp"
#include "smm/inequality_kernel.hpp"
#include "smm/runner.hpp"
#include "smm/scenario.hpp"
#include "smm/solver.hpp"

namespace fs = std::filesystem;
using namespace smm;

namespace tol {
constexpr std::uint64_t kMonteCarloSamples = 1000000;
constexpr std::uint64_t kMonteCarloSeed = 20240611;
constexpr double kSlackScale = 1e-10;
constexpr double kMonteCarloSeconds = 10.0;
constexpr int kCutoffGrid = 100000;
constexpr double kCutoffConstant = 0.01;
constexpr double kOracleAgreement = 1e-6;
constexpr double kOrderLo = 3.6;
constexpr double kOrderHi = 4.4;
constexpr double kIdentityLo = 3.4;
constexpr double kIdentityHi = 4.6;
constexpr double kNewtonResidual = 1e-10;
constexpr double kCTol = 10.0;
constexpr double kConstantGradient = 1e-8;
constexpr double kComparisonEquality = 1e-10;
constexpr double kComparisonFloor = -1e-10;
constexpr int kComparisonRadii = 1000;
}  // namespace tol

namespace {

struct Line {
    int id;
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

NonlinearityFamily sqrt_family() {
    PowerSum ps;
    ps.terms.push_back({profiles::constant(1.0), 0.5});
    return ps;
}

bool within(double x, double lo, double hi) { return x >= lo && x <= hi; }

Line algebra_monte_carlo_criterion() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto mc = algebra_monte_carlo(tol::kMonteCarloSamples, tol::kMonteCarloSeed, tol::kSlackScale, 1);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = mc.samples == tol::kMonteCarloSamples && mc.violations.empty() &&
                      mc.min_scaled_slack >= -tol::kSlackScale && secs < tol::kMonteCarloSeconds;
    return {1, pass,
            "samples=" + std::to_string(mc.samples) + " violations=" + std::to_string(mc.violations.size()) +
                fmt(" min_scaled_slack=%.3e", mc.min_scaled_slack) + fmt(" time=%.2fs", secs)};
}

double golden_max(const std::function<double(double)>& f, double a, double b) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - g * (b - a), x2 = a + g * (b - a), f1 = f(x1), f2 = f(x2);
    while (b - a > 1e-13) {
        if (f1 < f2) {
            a = x1, x1 = x2, f1 = f2, x2 = a + g * (b - a), f2 = f(x2);
        } else {
            b = x2, x2 = x1, f2 = f1, x1 = b - g * (b - a), f1 = f(x1);
        }
    }
    return f(0.5 * (a + b));
}

Line cutoff_criterion() {
    const auto cut = quintic_cutoff(tol::kCutoffGrid);
    // Conditions on the grid that defines c1, c2 over [1, 2], plus the flat pieces on either side.
    bool shape = true;
    for (int i = 0; i < cut.grid_points; ++i) {
        const double t = 1.0 + static_cast<double>(i) / (cut.grid_points - 1);
        const double p = cut.psi(t);
        shape = shape && p >= 0.0 && p <= 1.0 && cut.dpsi(t) <= 0.0 && cut.ddpsi(t) >= -cut.c2 &&
                cutoff_ratio(cut, t) <= cut.c1;
    }
    for (int i = 0; i <= 1000; ++i) {
        const double before = i / 1000.0, after = 2.0 + i / 1000.0;
        shape = shape && cut.psi(before) == 1.0 && cut.dpsi(before) == 0.0 && cut.ddpsi(before) == 0.0;
        shape = shape && cut.psi(after) == 0.0 && cut.dpsi(after) == 0.0 && cut.ddpsi(after) == 0.0;
    }
    const double c2 = golden_max([](double s) { return 60.0 * s - 180.0 * s * s + 120.0 * s * s * s; }, 0.0, 0.5);
    const double c1 = golden_max(
        [](double s) {
            const double S = s * s * s * (10.0 - 15.0 * s + 6.0 * s * s);
            return 30.0 * s * s * (1.0 - s) * (1.0 - s) / std::sqrt(1.0 - S);
        },
        0.0, 1.0 - 1e-9);
    const bool pass = shape && std::abs(cut.c2 - 5.77) <= tol::kCutoffConstant &&
                      std::abs(cut.c1 - 3.29) <= tol::kCutoffConstant &&
                      std::abs(cut.c1 - c1) <= tol::kOracleAgreement && std::abs(cut.c2 - c2) <= tol::kOracleAgreement;
    return {2, pass,
            std::string("shape=") + (shape ? "ok" : "violated") + fmt(" c1=%.6f", cut.c1) + fmt(" oracle=%.6f", c1) +
                fmt(" c2=%.6f", cut.c2) + fmt(" oracle=%.6f", c2)};
}

Line operator_order_criterion() {
    const ModelSpace spaces[] = {ModelSpace::euclidean(3, 3, profiles::constant(0.0), 2.0),
                                 ModelSpace::euclidean(3, 8, profiles::gaussian(0.5), 2.0)};
    const auto exact = exact_profiles::cosine_bump(2.0, 1.0);
    bool pass = true;
    std::string detail;
    for (const auto& s : spaces) {
        std::vector<double> op_err, sol_err;
        for (int N : {128, 256, 512}) {
            const auto grid = RadialGrid::for_space(s, N);
            const Manufactured mf = manufacture(s, exact, grid);
            const Field lap = assemble_witten(s, grid).apply(mf.exact);
            double e = 0.0;
            // Delta_f u_exact + Sigma(r) vanishes exactly in the continuum.
            for (std::size_t i = 0; i < grid.size(); ++i)
                e = std::max(e, std::abs(lap[i] + sigma_value(mf.family, grid.node(i), mf.exact[i])));
            op_err.push_back(e);
            const auto res = solve_newton(make_problem(s, mf.family, exact.value(s.r_max())), grid);
            double se = res.converged ? 0.0 : INFINITY;
            for (std::size_t i = 0; i < grid.size() && res.converged; ++i)
                se = std::max(se, std::abs(res.u[i] - mf.exact[i]));
            sol_err.push_back(se);
        }
        detail += std::string(s.weighted() ? " gaussian" : " flat") + " op";
        for (int i = 1; i < 3; ++i) {
            const double r = op_err[i - 1] / op_err[i];
            pass = pass && within(r, tol::kOrderLo, tol::kOrderHi);
            detail += fmt(" %.3f", r);
        }
        detail += " sol";
        for (int i = 1; i < 3; ++i) {
            const double r = sol_err[i - 1] / sol_err[i];
            pass = pass && within(r, tol::kOrderLo, tol::kOrderHi);
            detail += fmt(" %.3f", r);
        }
    }
    return {3, pass, detail.substr(1)};
}

Line identity_criterion() {
    const std::pair<ModelSpace, ExactProfile> fields[] = {
        {ModelSpace::euclidean(3, 5, profiles::constant(0.0), 2.0), exact_profiles::cosine_bump(2.0, 1.0)},
        {ModelSpace::euclidean(3, 8, profiles::gaussian(0.5), 2.0), exact_profiles::gaussian_bump(1.0, 0.5, 1.0)}};
    bool pass = true;
    std::string detail;
    for (const auto& [s, exact] : fields) {
        std::vector<double> heq, boch;
        for (int N : {128, 256, 512}) {
            const auto grid = RadialGrid::for_space(s, N);
            const Manufactured mf = manufacture(s, exact, grid);
            heq.push_back(check_h_equation(mf.exact, mf.family, s).max_abs());
            Field h(grid);
            for (std::size_t i = 0; i < h.size(); ++i) h[i] = std::log(mf.exact[i]);
            boch.push_back(check_bochner_identity(h, s, 1.5, mf.family).max_abs());
        }
        detail += " " + exact.label + " h-eq";
        for (int i = 1; i < 3; ++i) {
            pass = pass && within(heq[i - 1] / heq[i], tol::kIdentityLo, tol::kIdentityHi);
            detail += fmt(" %.3f", heq[i - 1] / heq[i]);
        }
        detail += " bochner";
        for (int i = 1; i < 3; ++i) {
            pass = pass && within(boch[i - 1] / boch[i], tol::kIdentityLo, tol::kIdentityHi);
            detail += fmt(" %.3f", boch[i - 1] / boch[i]);
        }
    }
    return {4, pass, detail.substr(1)};
}

Line local_estimate_criterion() {
    const auto s = ModelSpace::euclidean(3, 8, profiles::gaussian(0.5), 2.0);
    const auto grid = RadialGrid::for_space(s, 512);
    const auto family = sqrt_family();
    const auto solved = solve_newton(make_problem(s, family, 0.5), grid);
    if (!solved.converged) return {5, false, std::string("solver: ") + to_string(solved.status)};
    auto params = default_params(s, 1.0, 1.5, 0.5);
    params.c_tol = tol::kCTol;
    const auto rep = check_local_estimate(solved.u, family, s, params);
    Field bad = solved.u;
    for (std::size_t i = 0; i < bad.size(); ++i) bad[i] *= 1.0 + std::sin(10.0 * grid.node(i));
    bool control_fails = true;
    double control_slack = -INFINITY;
    if (bad.positive()) {
        const auto neg = check_local_estimate(bad, family, s, params);
        control_fails = !neg.pass;
        control_slack = neg.min_slack;
    }
    const bool pass = solved.residual_norm <= tol::kNewtonResidual && rep.pass &&
                      rep.min_slack >= -tol::kCTol * rep.h * rep.h * (1.0 + rep.rhs) && control_fails;
    return {5, pass,
            fmt("residual=%.3e", solved.residual_norm) + fmt(" min_slack=%.6e", rep.min_slack) +
                fmt(" rhs=%.6f", rep.rhs) + fmt(" control_slack=%.3e", control_slack) +
                (control_fails ? " control=fails" : " control=passes")};
}

Line harnack_criterion() {
    int scenarios = 0, passed = 0;
    std::string failed;
    for (const char* file : {"smoke.json", "full.json"}) {
        const auto cfg = load_config(fs::path(SMM_SOURCE_CONFIGS) / file);
        for (const auto& sc : cfg.scenarios) {
            if (std::find(sc.checks.begin(), sc.checks.end(), "harnack") == sc.checks.end()) continue;
            ++scenarios;
            const auto out = run_scenario(sc, sc.seed.value_or(cfg.seed), {"harnack"});
            if (!out.summary.checks.empty() && out.summary.pass()) {
                ++passed;
            } else {
                failed += " " + sc.name;
            }
        }
    }
    // Quadrature order on a smooth positive field.
    const auto s = ModelSpace::euclidean(3, 8, profiles::gaussian(0.5), 2.0);
    std::vector<double> q;
    for (int N : {128, 256, 512}) {
        const auto grid = RadialGrid::for_space(s, N);
        const Field u = Field::sample(grid, [](double r) { return 2.0 + std::cos(r); });
        const auto p = default_params(s, 1.0, 1.5, 0.5);
        q.push_back(harnack(u, PowerSum{}, s, p, sup_inf_bundle(u, PowerSum{}, s, p)).quadrature_error);
    }
    const double r1 = q[0] / q[1], r2 = q[1] / q[2];
    const bool pass = scenarios > 0 && passed == scenarios && within(r1, tol::kOrderLo, tol::kOrderHi) &&
                      within(r2, tol::kOrderLo, tol::kOrderHi);
    return {6, pass,
            "scenarios=" + std::to_string(passed) + "/" + std::to_string(scenarios) + failed +
                fmt(" quadrature_ratios=%.3f", r1) + fmt(" %.3f", r2)};
}

Line liouville_criterion() {
    const auto sphere = ModelSpace::spherical(3, 3, profiles::constant(0.0), M_PI);
    const auto grid = RadialGrid::for_space(sphere, 512);
    auto problem = make_problem(sphere, PowerSum{});
    // Seeded smooth non-constant start.
    std::mt19937_64 rng(tol::kMonteCarloSeed);
    std::uniform_real_distribution<double> c(-1.0, 1.0);
    double coef[4], total = 0.0;
    for (double& v : coef) total += std::abs(v = c(rng));
    problem.initial = Field::sample(grid, [&](double r) {
        double s = 0.0;
        for (int j = 0; j < 4; ++j) s += coef[j] * std::cos((j + 1) * r);
        return 1.0 + 0.4 * s / total;
    });
    const auto solved = solve_newton(problem, grid);
    double grad = INFINITY;
    if (solved.converged) {
        const Field du = derivative(solved.u);
        grad = 0.0;
        for (std::size_t i = 0; i < grid.size(); ++i) grad = std::max(grad, std::abs(du[i]) / solved.u[i]);
    }
    const auto verdict = liouville_conditions(sqrt_family(), 1.5);
    const auto attempt = solve_newton(make_problem(sphere, sqrt_family()), grid);
    const bool consistent = !attempt.converged && failure_consistent_with_nonexistence(sqrt_family(), sphere);
    const bool pass = solved.converged && grad < tol::kConstantGradient && verdict.kind == VerdictKind::holds &&
                      consistent;
    return {7, pass,
            fmt("sup_grad=%.3e", grad) + " verdict=" + to_string(verdict.kind) + " sqrt_solve=" +
                to_string(attempt.status) + (consistent ? " consistent_with_nonexistence" : " inconsistent")};
}

Line comparison_criterion() {
    bool pass = true;
    double equality = 0.0, floor = INFINITY;
    const auto hyp = ModelSpace::hyperbolic(3, 3, profiles::constant(0.0), 5.0);
    for (int i = 1; i <= tol::kComparisonRadii; ++i)
        equality = std::max(equality, std::abs(comparison_check(hyp, 1.0, 5.0 * i / tol::kComparisonRadii)));
    pass = equality <= tol::kComparisonEquality;
    const ModelSpace others[] = {ModelSpace::euclidean(3, 3, profiles::constant(0.0), 2.0),
                                 ModelSpace::euclidean(3, 8, profiles::gaussian(0.5), 2.0),
                                 ModelSpace::hyperbolic(4, 7, profiles::gaussian(0.2), 2.0),
                                 ModelSpace::spherical(3, 3, profiles::constant(0.0), M_PI),
                                 ModelSpace::spherical(3, 6, profiles::cosine(0.3, -0.3), M_PI)};
    for (const auto& s : others) {
        const double k = curvature_lower_bound(s, s.r_max());
        const int last = s.closed() ? tol::kComparisonRadii - 1 : tol::kComparisonRadii;
        for (int i = 1; i <= last; ++i) floor = std::min(floor, comparison_check(s, k, s.r_max() * i / tol::kComparisonRadii));
    }
    pass = pass && floor >= tol::kComparisonFloor;
    return {8, pass, fmt("hyperbolic_max_abs_slack=%.3e", equality) + fmt(" catalog_min_slack=%.3e", floor)};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Line determinism_criterion(const fs::path& work) {
    const fs::path a = work / "run_a", b = work / "run_b";
    fs::remove_all(a);
    fs::remove_all(b);
    std::ostringstream out, err;
    RunOverrides oa, ob;
    oa.out = a;
    ob.out = b;
    const int ca = run(fs::path(SMM_SOURCE_CONFIGS) / "smoke.json", oa, out, err).exit_code;
    const int cb = run(fs::path(SMM_SOURCE_CONFIGS) / "smoke.json", ob, out, err).exit_code;
    std::size_t files = 0, differing = 0;
    for (const auto& e : fs::recursive_directory_iterator(a)) {
        if (!e.is_regular_file()) continue;
        ++files;
        const fs::path other = b / fs::relative(e.path(), a);
        if (!fs::exists(other) || slurp(e.path()) != slurp(other)) ++differing;
    }
    std::size_t files_b = 0;
    for (const auto& e : fs::recursive_directory_iterator(b)) files_b += e.is_regular_file();
    const bool pass = ca == 0 && cb == 0 && files > 0 && files == files_b && differing == 0;
    return {9, pass,
            "files=" + std::to_string(files) + " differing=" + std::to_string(differing) +
                " exit=" + std::to_string(ca) + "," + std::to_string(cb)};
}

}  // namespace

int main(int argc, char** argv) {
    const fs::path work = argc > 1 ? fs::path(argv[1]) : fs::temp_directory_path() / "smm_acceptance";
    fs::create_directories(work);
    std::vector<std::function<Line()>> criteria = {
        algebra_monte_carlo_criterion, cutoff_criterion,  operator_order_criterion,
        identity_criterion,            local_estimate_criterion, harnack_criterion,
        liouville_criterion,           comparison_criterion, [&] { return determinism_criterion(work); }};
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Line line{static_cast<int>(i + 1), false, ""};
        try {
            line = criteria[i]();
        } catch (const std::exception& e) {
            line.detail = std::string("exception: ") + e.what();
        }
        failures += !line.pass;
        std::cout << (line.pass ? "PASS" : "FAIL") << " criterion " << line.id << ": " << line.detail << '\n';
    }
    return failures == 0 ? 0 : 1;
}
