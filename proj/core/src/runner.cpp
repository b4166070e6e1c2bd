#include "smm/runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <thread>

#include "json.hpp"
#include "smm/estimates.hpp"
#include "smm/inequality_kernel.hpp"

namespace smm {

using ojson = nlohmann::ordered_json;

bool RunSummary::pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckOutcome& c) { return c.pass; });
}

namespace {

constexpr double kIdentityFloor = 1e-9;
/// Open models: identities are measured on r <= kIdentityWindow * r_max, away
/// from the Dirichlet node where the discrete solution does not satisfy the PDE.
constexpr double kIdentityWindow = 0.9;
constexpr double kComparisonTol = 1e-10;
constexpr int kComparisonRadii = 1000;

std::string number_text(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ojson number_json(double v) { return std::isfinite(v) ? ojson(v) : ojson(number_text(v)); }

bool has(const std::vector<std::string>& list, const char* name) {
    return std::find(list.begin(), list.end(), name) != list.end();
}

/// level * (1 + amplitude * sum_j c_j cos(j r)) with seeded c and sum |c_j| = 1.
Field random_initial(const RadialGrid& grid, double level, double amplitude, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    double c[4];
    double total = 0.0;
    for (double& v : c) {
        v = coef(rng);
        total += std::abs(v);
    }
    for (double& v : c) v /= total;
    return Field::sample(grid, [&](double r) {
        double s = 0.0;
        for (int j = 0; j < 4; ++j) s += c[j] * std::cos((j + 1) * r);
        return level * (1.0 + amplitude * s);
    });
}

struct Solved {
    SolveResult result;
    BVPProblem problem;
};

Solved solve_on(const Scenario& sc, const RadialGrid& grid, std::uint64_t seed) {
    BVPProblem problem = make_problem(*sc.space, *sc.family, sc.dirichlet);
    switch (sc.initial.kind) {
        case InitialSpec::Kind::automatic:
            if (sc.exact && sc.space->closed()) problem.initial = Field::sample(grid, sc.exact->value);
            break;
        case InitialSpec::Kind::constant:
            problem.initial = sc.initial.level;
            break;
        case InitialSpec::Kind::random:
            problem.initial = random_initial(grid, sc.initial.level, sc.initial.amplitude, seed);
            break;
    }
    SolveResult result = solve_newton(problem, grid, sc.solver);
    return {std::move(result), std::move(problem)};
}

ojson estimate_json(const EstimateReport& r, const EstimateParams& p) {
    return ojson{{"mu", p.mu},
                 {"eps", p.eps},
                 {"R", p.R},
                 {"k", p.k},
                 {"A_sigma", number_json(r.bundle.A_sigma)},
                 {"B_sigma", number_json(r.bundle.B_sigma)},
                 {"C_sigma", number_json(r.bundle.C_sigma)},
                 {"sup_growth", number_json(r.bundle.sup_growth)},
                 {"rhs", number_json(r.rhs)},
                 {"rhs_geometric", number_json(r.breakdown.geometric)},
                 {"rhs_nonlinear", number_json(r.breakdown.nonlinear)},
                 {"rhs_growth", number_json(r.breakdown.growth)},
                 {"max_lhs", number_json(r.max_lhs)},
                 {"min_slack", number_json(r.min_slack)},
                 {"witness_r", r.witness_r},
                 {"tolerance", number_json(r.tolerance)},
                 {"h", r.h},
                 {"pass", r.pass}};
}

std::vector<std::string> estimate_row(const std::string& scenario, const char* check, const EstimateReport& r,
                                      const EstimateParams& p) {
    return {scenario,
            check,
            number_text(p.mu),
            number_text(p.eps),
            number_text(p.R),
            number_text(p.k),
            number_text(r.bundle.A_sigma),
            number_text(r.bundle.B_sigma),
            number_text(r.bundle.C_sigma),
            number_text(r.rhs),
            number_text(r.max_lhs),
            number_text(r.min_slack),
            r.pass ? "true" : "false"};
}

CsvTable estimate_table(const Field& u, const EstimateReport& r) {
    CsvTable t{"estimate.csv", {"r", "u", "lhs", "rhs_line", "slack"}, {}};
    for (std::size_t i = 0; i <= r.region_last; ++i)
        t.rows.push_back({u.grid().node(i), u[i], r.lhs[i], r.rhs, r.rhs - r.lhs[i]});
    return t;
}

double ratio_margin(double ratio, double lo, double hi) { return std::min(ratio - lo, hi - ratio); }

class ScenarioRun {
public:
    ScenarioRun(const Scenario& sc, std::uint64_t seed, std::vector<std::string> checks)
        : sc_(sc), seed_(seed), checks_(std::move(checks)) {
        out_.summary.scenario = sc.name;
        out_.summary.grid = sc.grid;
        out_.summary.seed = seed;
    }

    ScenarioOutcome finish() {
        if (checks_.empty()) return std::move(out_);
        report_["scenario"] = sc_.name;
        report_["grid"] = sc_.grid;
        report_["seed"] = seed_;
        if (sc_.space) report_["space"] = sc_.space->describe();
        if (sc_.family) report_["family"] = describe(*sc_.family);
        report_["checks"] = ojson::object();

        if (sc_.needs_solution()) prepare_solution();
        for (const std::string& name : checks_) {
            CheckOutcome c{name, false, 0.0, ""};
            ojson detail;
            try {
                c = dispatch(name, detail);
            } catch (const std::exception& e) {
                c.pass = false;
                c.slack = -INFINITY;
                c.note = std::string("error: ") + e.what();
            }
            detail["pass"] = c.pass;
            detail["slack"] = number_json(c.slack);
            if (!c.note.empty()) detail["note"] = c.note;
            report_["checks"][name] = std::move(detail);
            out_.summary.checks.push_back(std::move(c));
        }
        out_.report_json = report_.dump(2) + "\n";
        return std::move(out_);
    }

private:
    void prepare_solution() {
        grid_.emplace(RadialGrid::for_space(*sc_.space, sc_.grid));
        Solved s = solve_on(sc_, *grid_, seed_);
        problem_.emplace(std::move(s.problem));
        solve_.emplace(std::move(s.result));
        report_["solve"] = ojson{{"status", to_string(solve_->status)},
                                 {"converged", solve_->converged},
                                 {"iterations", solve_->iterations},
                                 {"residual_norm", number_json(solve_->residual_norm)},
                                 {"message", solve_->message}};
        if (!solve_->converged) return;

        u_.emplace(solve_->u);
        if (sc_.corrupt) {
            for (std::size_t i = 0; i < u_->size(); ++i) (*u_)[i] *= 1.0 + std::sin(10.0 * grid_->node(i));
            report_["solve"]["corrupted"] = "u * (1 + sin(10 r))";
        }

        CsvTable field{"field.csv", {"r", "u", "residual"}, {}};
        const Field res = residual(*problem_, *u_);
        if (sc_.exact) {
            field.columns.push_back("exact");
            field.columns.push_back("error");
        }
        for (std::size_t i = 0; i < u_->size(); ++i) {
            const double r = grid_->node(i);
            std::vector<double> row{r, (*u_)[i], res[i]};
            if (sc_.exact) {
                row.push_back(sc_.exact->value(r));
                row.push_back((*u_)[i] - sc_.exact->value(r));
            }
            field.rows.push_back(std::move(row));
        }
        out_.tables.push_back(std::move(field));

        const double R = sc_.params.R.value_or(sc_.space->r_max() / 2.0);
        params_ = sc_.params.optimize ? optimize_params(*u_, *sc_.family, *sc_.space, R)
                                      : default_params(*sc_.space, R, sc_.params.mu, sc_.params.eps);
        params_->c_tol = sc_.params.c_tol;
        report_["params"] = ojson{{"mu", params_->mu}, {"eps", params_->eps}, {"R", params_->R},
                                  {"k", params_->k},   {"c1", params_->c1},   {"c2", params_->c2},
                                  {"m", params_->m},   {"c_tol", params_->c_tol},
                                  {"optimized", sc_.params.optimize}};
    }

    bool solved() const { return u_.has_value(); }

    CheckOutcome unsolved(const std::string& name) const {
        return {name, false, -INFINITY,
                std::string("no solution: ") + to_string(solve_->status) + " (" + solve_->message + ")"};
    }

    CheckOutcome dispatch(const std::string& name, ojson& detail) {
        if (name == "kernel") return check_kernel(detail);
        if (name == "comparison") return check_comparison(detail);
        if (name == "convergence") return check_convergence(detail);
        if (name == "liouville") return check_liouville_claim(detail);
        if (!solved()) return unsolved(name);
        if (name == "local") return check_local(detail);
        if (name == "global") return check_global(detail);
        if (name == "harnack") return check_harnack(detail);
        if (name == "identities") return check_identities(detail);
        throw std::logic_error("unhandled check " + name);
    }

    CheckOutcome check_local(ojson& detail) {
        const EstimateReport r = check_local_estimate(*u_, *sc_.family, *sc_.space, *params_);
        detail = estimate_json(r, *params_);
        out_.estimate_rows.push_back(estimate_row(sc_.name, "local", r, *params_));
        out_.tables.push_back(estimate_table(*u_, r));
        return {"local", r.pass, r.min_slack, r.pass ? "" : "lhs exceeds rhs at r=" + number_text(r.witness_r)};
    }

    CheckOutcome check_global(ojson& detail) {
        EstimateParams p = *params_;
        p.k = curvature_lower_bound(*sc_.space, sc_.space->r_max());
        const EstimateReport r = check_global_estimate(*u_, *sc_.family, *sc_.space, p);
        detail = estimate_json(r, p);
        out_.estimate_rows.push_back(estimate_row(sc_.name, "global", r, p));
        if (!has(checks_, "local")) out_.tables.push_back(estimate_table(*u_, r));
        return {"global", r.pass, r.min_slack, r.pass ? "" : "lhs exceeds rhs at r=" + number_text(r.witness_r)};
    }

    CheckOutcome check_harnack(ojson& detail) {
        const SupInfBundle bundle = sup_inf_bundle(*u_, *sc_.family, *sc_.space, *params_);
        const HarnackReport r = harnack(*u_, *sc_.family, *sc_.space, *params_, bundle);
        const double h = grid_->h();
        const double quad_tol = params_->c_tol * h * h;
        const bool quad_pass = r.quadrature_error <= quad_tol;
        detail = ojson{{"H", number_json(r.H_const)},
                       {"sup_grad_sq", r.sup_grad_sq},
                       {"grad_bound_slack", number_json(r.grad_bound_slack)},
                       {"grad_tolerance", number_json(r.grad_tolerance)},
                       {"sup_u", r.sup_u},
                       {"inf_u", r.inf_u},
                       {"supinf_slack", number_json(r.supinf_slack)},
                       {"supinf_tolerance", number_json(r.supinf_tolerance)},
                       {"quadrature_error", r.quadrature_error},
                       {"quadrature_tolerance", quad_tol},
                       {"grad_pass", r.grad_pass},
                       {"supinf_pass", r.supinf_pass},
                       {"quadrature_pass", quad_pass}};
        std::string note;
        if (!r.grad_pass) note = "gradient bound violated";
        else if (!r.supinf_pass) note = "sup/inf bound violated";
        else if (!quad_pass) note = "log-ratio quadrature off by " + number_text(r.quadrature_error);
        return {"harnack", r.pass && quad_pass, std::min(r.grad_bound_slack, r.supinf_slack), note};
    }

    CheckOutcome check_liouville_claim(ojson& detail) {
        if (!solved()) {
            const bool consistent = failure_consistent_with_nonexistence(*sc_.family, *sc_.space);
            const auto found = liouville_mu_search(*sc_.family);
            detail = ojson{{"solver_status", to_string(solve_->status)},
                           {"consistent_with_nonexistence", consistent}};
            if (found) {
                detail["certified_mu"] = found->mu;
                detail["verdict"] = to_string(found->verdict.kind);
            }
            if (consistent)
                return {"liouville", true, 0.0,
                        std::string("solver ") + to_string(solve_->status) +
                            "; consistent with nonexistence (conditions hold, Sigma has no positive zero)"};
            return unsolved("liouville");
        }
        const LiouvilleReport r = check_liouville(*u_, *sc_.family, *sc_.space, *params_);
        const LiouvilleVerdict declared = liouville_conditions(*sc_.family, params_->mu);
        detail = ojson{{"mu", r.mu},
                       {"range", {r.range.lo, r.range.hi}},
                       {"verdict", to_string(r.conditions.kind)},
                       {"failed_condition", r.conditions.failed_condition},
                       {"declared_range_verdict", to_string(declared.kind)},
                       {"gradient_sup", r.gradient_sup},
                       {"sigma_at_solution", r.sigma_at_solution},
                       {"tolerance", r.tolerance},
                       {"applicable", r.applicable}};
        const double slack = r.tolerance - std::max(r.gradient_sup, r.sigma_at_solution);
        std::string note = r.applicable ? "" : "conditions not certified on the solution range";
        if (!r.pass) note = "non-constant solution under certified conditions";
        return {"liouville", r.pass, slack, note};
    }

    CheckOutcome check_identities(ojson& detail) {
        std::vector<int> levels = sc_.refinement;
        if (levels.empty()) {
            if (sc_.grid % 4 != 0 || sc_.grid / 4 < RadialGrid::kMinIntervals)
                return {"identities", false, -INFINITY, "grid must be a multiple of 4 and at least 64"};
            levels = {sc_.grid / 4, sc_.grid / 2, sc_.grid};
        }
        const bool bochner = sc_.space->m() > sc_.space->n();
        std::vector<double> h_res;
        std::vector<double> b_res;
        for (int N : levels) {
            const RadialGrid grid = RadialGrid::for_space(*sc_.space, N);
            Field u(grid);
            if (sc_.exact) {
                u = Field::sample(grid, sc_.exact->value);
            } else {
                Solved s = solve_on(sc_, grid, seed_);
                if (!s.result.converged) return {"identities", false, -INFINITY, "solve failed at N=" + std::to_string(N)};
                u = s.result.u;
            }
            const std::size_t window = sc_.space->closed()
                                           ? grid.size() - 1
                                           : grid.last_index_within(kIdentityWindow * sc_.space->r_max());
            auto interior_max = [&](const IdentityResidual& r) {
                return r.residual.max_abs(r.first, std::min(r.last, window));
            };
            h_res.push_back(interior_max(check_h_equation(u, *sc_.family, *sc_.space)));
            if (bochner) {
                Field h(grid);
                for (std::size_t i = 0; i < u.size(); ++i) h[i] = std::log(u[i]);
                b_res.push_back(interior_max(check_bochner_identity(h, *sc_.space, params_->mu, *sc_.family)));
            }
        }
        double slack = INFINITY;
        bool pass = true;
        ojson ratios = ojson::array();
        auto judge = [&](const std::vector<double>& res) {
            for (std::size_t i = 1; i < res.size(); ++i) {
                if (res[i - 1] <= kIdentityFloor) continue;
                const double ratio = res[i - 1] / res[i];
                ratios.push_back(ratio);
                const double margin = ratio_margin(ratio, 3.4, 4.6);
                slack = std::min(slack, margin);
                pass = pass && margin >= 0.0;
            }
        };
        judge(h_res);
        judge(b_res);
        if (!std::isfinite(slack)) slack = 0.0;
        detail = ojson{{"levels", levels},
                       {"h_equation", h_res},
                       {"bochner", bochner ? ojson(b_res) : ojson("skipped: m = n")},
                       {"ratios", ratios},
                       {"ratio_window", {3.4, 4.6}},
                       {"floor", kIdentityFloor},
                       {"window_r_max_fraction", sc_.space->closed() ? 1.0 : kIdentityWindow}};
        return {"identities", pass, slack, pass ? "" : "residual ratio outside [3.4, 4.6]"};
    }

    CheckOutcome check_kernel(ojson& detail) {
        const MonteCarloResult mc = algebra_monte_carlo(sc_.kernel.samples, seed_, sc_.kernel.tolerance);
        const CutoffProfile cut = quintic_cutoff();
        bool shape = true;
        for (int i = 0; i <= 1000; ++i) {
            const double t = 1.0 + i / 1000.0;
            shape = shape && cut.psi(t) >= 0.0 && cut.psi(t) <= 1.0 && cut.dpsi(t) <= 0.0;
        }
        // The ratio behaves like 9.5 sqrt(2 - t): it must decrease over the last
        // grid cells and vanish at the final grid node t = 2.
        const int cells = cut.grid_points - 1;
        double tail = cutoff_ratio(cut, 2.0 - 1000.0 / cells);
        for (int i = 999; i >= 0; --i) {
            const double next = cutoff_ratio(cut, 2.0 - static_cast<double>(i) / cells);
            shape = shape && next < tail;
            tail = next;
        }
        shape = shape && tail < 1e-2;
        const bool c1_ok = std::abs(cut.c1 - 3.29) <= 0.01;
        const bool c2_ok = std::abs(cut.c2 - 5.77) <= 0.01;
        const bool mc_ok = mc.violations.empty();

        CsvTable witnesses{"kernel_witnesses.csv", {"a", "b", "z", "c", "y", "mu", "eps", "lhs", "rhs", "scaled_slack"}, {}};
        for (const AlgebraSample& s : mc.violations) {
            const AlgebraSides sides = algebra_sides(s);
            witnesses.rows.push_back({s.a, s.b, s.z, s.c, s.y, s.mu, s.eps, sides.lhs, sides.rhs,
                                      sides.slack() / sides.scale()});
        }
        out_.tables.push_back(std::move(witnesses));
        detail = ojson{{"samples", mc.samples},
                       {"min_scaled_slack", mc.min_scaled_slack},
                       {"worst_index", mc.worst_index},
                       {"violations", mc.violations.size()},
                       {"tolerance", sc_.kernel.tolerance},
                       {"c1", cut.c1},
                       {"c2", cut.c2},
                       {"cutoff_shape", shape},
                       {"tail_ratio", tail}};
        std::string note;
        if (!mc_ok) note = std::to_string(mc.violations.size()) + " algebra violations";
        else if (!c1_ok || !c2_ok) note = "cutoff constants off target";
        else if (!shape) note = "cutoff shape conditions violated";
        return {"kernel", mc_ok && c1_ok && c2_ok && shape, mc.min_scaled_slack, note};
    }

    CheckOutcome check_comparison(ojson& detail) {
        const ModelSpace& space = *sc_.space;
        const double k = curvature_lower_bound(space, space.r_max());
        const bool equality = space.kind() == ModelKind::hyperbolic && !space.weighted() && space.m() == space.n();
        CsvTable t{"comparison.csv", {"r", "laplacian_r", "bound", "slack"}, {}};
        double min_slack = INFINITY;
        double max_abs = 0.0;
        const int last = space.closed() ? kComparisonRadii - 1 : kComparisonRadii;
        for (int i = 1; i <= last; ++i) {
            const double r = space.r_max() * i / kComparisonRadii;
            const double slack = comparison_check(space, k, r);
            t.rows.push_back({r, drift_laplacian_radial(space, r), comparison_bound(space.m(), k, r), slack});
            min_slack = std::min(min_slack, slack);
            max_abs = std::max(max_abs, std::abs(slack));
        }
        out_.tables.push_back(std::move(t));
        const bool pass = min_slack >= -kComparisonTol && (!equality || max_abs <= kComparisonTol);
        detail = ojson{{"k", k},
                       {"radii", last},
                       {"min_slack", min_slack},
                       {"max_abs_slack", max_abs},
                       {"equality_case", equality},
                       {"tolerance", kComparisonTol}};
        std::string note;
        if (!pass) note = equality && min_slack >= -kComparisonTol ? "equality case off by " + number_text(max_abs)
                                                                   : "Laplacian exceeds the comparison bound";
        return {"comparison", pass, equality ? kComparisonTol - max_abs : min_slack, note};
    }

    CheckOutcome check_convergence(ojson& detail) {
        std::vector<double> errors;
        for (int N : sc_.refinement) {
            const RadialGrid grid = RadialGrid::for_space(*sc_.space, N);
            Scenario level = sc_;
            Manufactured mf = manufacture(*sc_.space, *sc_.exact, grid);
            level.family = mf.family;
            level.corrupt = false;
            Solved s = solve_on(level, grid, seed_);
            if (!s.result.converged)
                return {"convergence", false, -INFINITY, "solve failed at N=" + std::to_string(N)};
            CsvTable t{"refinement_N" + std::to_string(N) + ".csv", {"r", "u", "exact", "error"}, {}};
            double err = 0.0;
            for (std::size_t i = 0; i < grid.size(); ++i) {
                const double e = s.result.u[i] - mf.exact[i];
                err = std::max(err, std::abs(e));
                t.rows.push_back({grid.node(i), s.result.u[i], mf.exact[i], e});
            }
            errors.push_back(err);
            out_.tables.push_back(std::move(t));
        }
        double slack = INFINITY;
        ojson ratios = ojson::array();
        for (std::size_t i = 1; i < errors.size(); ++i) {
            const double ratio = errors[i - 1] / errors[i];
            ratios.push_back(ratio);
            slack = std::min(slack, ratio_margin(ratio, 3.6, 4.4));
        }
        detail = ojson{{"levels", sc_.refinement}, {"max_errors", errors}, {"ratios", ratios}, {"ratio_window", {3.6, 4.4}}};
        const bool pass = slack >= 0.0;
        return {"convergence", pass, slack, pass ? "" : "error ratio outside [3.6, 4.4]"};
    }

    const Scenario& sc_;
    std::uint64_t seed_;
    std::vector<std::string> checks_;
    ScenarioOutcome out_;
    ojson report_;
    std::optional<RadialGrid> grid_;
    std::optional<BVPProblem> problem_;
    std::optional<SolveResult> solve_;
    std::optional<Field> u_;
    std::optional<EstimateParams> params_;
};

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(path.string() + ": cannot open for writing");
    out << content;
    if (!out) throw std::runtime_error(path.string() + ": write failed");
}

void make_dirs(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error(dir.string() + ": " + ec.message());
}

std::string render_rows(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
    std::string s;
    for (std::size_t i = 0; i < header.size(); ++i) s += (i ? "," : "") + header[i];
    s += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + csv_field(row[i]);
        s += '\n';
    }
    return s;
}

}  // namespace

ScenarioOutcome run_scenario(const Scenario& scenario, std::uint64_t seed, const std::vector<std::string>& check_filter) {
    std::vector<std::string> checks;
    for (const std::string& c : scenario.checks)
        if (check_filter.empty() || has(check_filter, c.c_str())) checks.push_back(c);
    Scenario filtered = scenario;
    filtered.checks = checks;
    return ScenarioRun(filtered, seed, checks).finish();
}

std::vector<std::filesystem::path> emit_plots(const ScenarioOutcome& outcome, const std::filesystem::path& out_dir) {
    std::vector<std::filesystem::path> written;
    if (outcome.summary.checks.empty()) return written;
    const std::filesystem::path dir = out_dir / outcome.summary.scenario;
    make_dirs(dir);
    write_file(dir / "report.json", outcome.report_json);
    written.push_back(dir / "report.json");
    for (const CsvTable& t : outcome.tables) {
        std::string s;
        for (std::size_t i = 0; i < t.columns.size(); ++i) s += (i ? "," : "") + t.columns[i];
        s += '\n';
        for (const auto& row : t.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) s += (i ? "," : "") + number_text(row[i]);
            s += '\n';
        }
        write_file(dir / t.file_name, s);
        written.push_back(dir / t.file_name);
    }
    return written;
}

std::string summary_line(const RunSummary& summary, const CheckOutcome& check) {
    char buf[512];
    std::snprintf(buf, sizeof buf, "%s %-28s %-11s slack=%+.6e N=%d seed=%llu", check.pass ? "PASS" : "FAIL",
                  summary.scenario.c_str(), check.check.c_str(), check.slack, summary.grid,
                  static_cast<unsigned long long>(summary.seed));
    std::string line = buf;
    if (!check.note.empty()) line += " " + check.note;
    return line;
}

RunResult run(const std::filesystem::path& config_path, const RunOverrides& overrides, std::ostream& out,
              std::ostream& err) {
    RunResult result;
    Config config;
    try {
        config = load_config(config_path);
        for (const std::string& c : overrides.checks)
            if (!is_check_name(c)) throw ConfigError("--check: unknown check '" + c + "'");
        if (overrides.grid && *overrides.grid < RadialGrid::kMinIntervals)
            throw ConfigError("--grid: must be at least " + std::to_string(RadialGrid::kMinIntervals));
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        result.exit_code = 2;
        return result;
    }

    if (overrides.grid)
        for (Scenario& s : config.scenarios) s.grid = *overrides.grid;
    const std::uint64_t base_seed = overrides.seed.value_or(config.seed);
    const std::filesystem::path out_dir = overrides.out.value_or(std::filesystem::path(config.output_dir));

    const std::size_t count = config.scenarios.size();
    std::vector<ScenarioOutcome> outcomes(count);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            const Scenario& sc = config.scenarios[i];
            const auto start = std::chrono::steady_clock::now();
            const std::uint64_t seed = overrides.seed ? base_seed : sc.seed.value_or(base_seed);
            try {
                outcomes[i] = run_scenario(sc, seed, overrides.checks);
            } catch (const std::exception& e) {
                outcomes[i].summary = {sc.name, sc.grid, seed, {{"setup", false, -INFINITY, e.what()}}, 0.0};
            }
            outcomes[i].summary.seconds =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        }
    };
    const unsigned jobs = std::max(1u, std::min<unsigned>(overrides.jobs, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(worker);
    }

    std::vector<std::vector<std::string>> summary_rows;
    std::vector<std::vector<std::string>> estimate_rows;
    bool all_pass = true;
    try {
        for (const ScenarioOutcome& o : outcomes) {
            for (const CheckOutcome& c : o.summary.checks) {
                out << summary_line(o.summary, c) << '\n';
                summary_rows.push_back({o.summary.scenario, c.check, c.pass ? "PASS" : "FAIL", number_text(c.slack),
                                        std::to_string(o.summary.grid), std::to_string(o.summary.seed), c.note});
            }
            char tbuf[128];
            std::snprintf(tbuf, sizeof tbuf, "time %-28s %.3fs", o.summary.scenario.c_str(), o.summary.seconds);
            out << tbuf << '\n';
            all_pass = all_pass && o.summary.pass();
            emit_plots(o, out_dir);
            estimate_rows.insert(estimate_rows.end(), o.estimate_rows.begin(), o.estimate_rows.end());
            result.summaries.push_back(o.summary);
        }
        if (!summary_rows.empty()) {
            make_dirs(out_dir);
            write_file(out_dir / "summary.csv",
                       render_rows({"scenario", "check", "status", "slack", "grid", "seed", "note"}, summary_rows));
            write_file(out_dir / "estimates.csv",
                       render_rows({"scenario", "check", "mu", "eps", "R", "k", "A", "B", "C", "rhs", "max_lhs",
                                    "slack", "pass"},
                                   estimate_rows));
        }
    } catch (const std::runtime_error& e) {
        err << "output error: " << e.what() << '\n';
        result.exit_code = 2;
        return result;
    }
    result.exit_code = all_pass ? 0 : 1;
    return result;
}

}  // namespace smm
