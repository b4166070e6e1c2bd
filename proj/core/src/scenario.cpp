#include "smm/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace smm {

using nlohmann::json;

bool is_check_name(std::string_view name) {
    return std::find(std::begin(kCheckNames), std::end(kCheckNames), name) != std::end(kCheckNames);
}

bool Scenario::needs_solution() const {
    return std::any_of(checks.begin(), checks.end(), [](const std::string& c) {
        return c != "kernel" && c != "comparison";
    });
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ConfigError(path + ": " + what);
}

/// Object view that rejects unknown keys and reports errors by key path.
class Node {
public:
    Node(const json& value, std::string path) : value_(value), path_(std::move(path)) {}

    const json& raw() const { return value_; }
    const std::string& path() const { return path_; }

    void expect_object(std::initializer_list<std::string_view> allowed) const {
        if (!value_.is_object()) fail(path_, "expected an object");
        for (const auto& [key, _] : value_.items()) {
            if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
                fail(path_, "unknown key '" + key + "'");
        }
    }

    bool has(const char* key) const { return value_.is_object() && value_.contains(key); }

    Node at(const char* key) const {
        if (!has(key)) fail(path_, std::string("missing key '") + key + "'");
        return Node(value_.at(key), path_ + "." + key);
    }

    Node at(std::size_t i) const { return Node(value_.at(i), path_ + "[" + std::to_string(i) + "]"); }

    double number() const {
        if (!value_.is_number()) fail(path_, "expected a number");
        const double v = value_.get<double>();
        if (!std::isfinite(v)) fail(path_, "expected a finite number");
        return v;
    }

    double number(const char* key, double fallback) const { return has(key) ? at(key).number() : fallback; }

    long long integer() const {
        if (!value_.is_number_integer()) fail(path_, "expected an integer");
        return value_.get<long long>();
    }

    std::string string() const {
        if (!value_.is_string()) fail(path_, "expected a string");
        return value_.get<std::string>();
    }

    bool boolean() const {
        if (!value_.is_boolean()) fail(path_, "expected true or false");
        return value_.get<bool>();
    }

    std::size_t array_size() const {
        if (!value_.is_array()) fail(path_, "expected an array");
        return value_.size();
    }

private:
    const json& value_;
    std::string path_;
};

int positive_int(const Node& node, long long lo, long long hi) {
    const long long v = node.integer();
    if (v < lo || v > hi) fail(node.path(), "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return static_cast<int>(v);
}

ScalarFn parse_profile(const Node& node) {
    if (node.raw().is_number()) return profiles::constant(node.number());
    node.expect_object({"name", "value", "alpha", "coeffs", "c0", "c1", "c2", "a", "b"});
    const std::string name = node.at("name").string();
    if (name == "constant") return profiles::constant(node.at("value").number());
    if (name == "linear") return profiles::linear();
    if (name == "sine") return profiles::sine();
    if (name == "gaussian") return profiles::gaussian(node.at("alpha").number());
    if (name == "cosine") return profiles::cosine(node.number("c0", 0.0), node.at("c1").number());
    if (name == "quadratic") return profiles::quadratic(node.number("c0", 0.0), node.at("c2").number());
    if (name == "exponential") return profiles::exponential(node.at("a").number(), node.at("b").number());
    if (name == "polynomial") {
        const Node coeffs = node.at("coeffs");
        std::vector<double> c(coeffs.array_size());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = coeffs.at(i).number();
        if (c.empty()) fail(coeffs.path(), "needs at least one coefficient");
        return profiles::polynomial(std::move(c));
    }
    fail(node.path() + ".name", "unknown profile '" + name + "'");
}

ModelSpace parse_space(const Node& node) {
    node.expect_object({"model", "n", "m", "r_max", "weight"});
    const std::string model = node.at("model").string();
    const int n = positive_int(node.at("n"), 2, 64);
    const double m = node.has("m") ? node.at("m").number() : n;
    const ScalarFn weight = node.has("weight") ? parse_profile(node.at("weight")) : profiles::constant(0.0);
    try {
        if (model == "euclidean") return ModelSpace::euclidean(n, m, weight, node.at("r_max").number());
        if (model == "hyperbolic") return ModelSpace::hyperbolic(n, m, weight, node.at("r_max").number());
        if (model == "spherical") return ModelSpace::spherical(n, m, weight, node.number("r_max", M_PI));
    } catch (const std::invalid_argument& e) {
        fail(node.path(), e.what());
    } catch (const std::domain_error& e) {
        fail(node.path(), e.what());
    }
    fail(node.path() + ".model", "unknown model '" + model + "' (euclidean, hyperbolic, spherical)");
}

ExactProfile parse_exact(const Node& node) {
    node.expect_object({"name", "a", "b", "c", "omega"});
    const std::string name = node.at("name").string();
    if (name == "cosine_bump")
        return exact_profiles::cosine_bump(node.at("a").number(), node.at("b").number(), node.number("omega", 1.0));
    if (name == "gaussian_bump")
        return exact_profiles::gaussian_bump(node.at("a").number(), node.at("b").number(), node.at("c").number());
    fail(node.path() + ".name", "unknown exact profile '" + name + "'");
}

NonlinearityFamily parse_family(const Node& node, const std::optional<ModelSpace>& space,
                                std::optional<ExactProfile>& exact) {
    node.expect_object({"kind", "terms", "p", "gamma", "q", "s", "r", "h", "alpha", "beta", "exact"});
    const std::string kind = node.at("kind").string();
    if (kind == "zero") return PowerSum{};
    if (kind == "power_sum") {
        const Node terms = node.at("terms");
        PowerSum ps;
        for (std::size_t i = 0; i < terms.array_size(); ++i) {
            const Node t = terms.at(i);
            t.expect_object({"coef", "exponent"});
            ps.terms.push_back({parse_profile(t.at("coef")), t.at("exponent").number()});
        }
        return ps;
    }
    if (kind == "log_gamma")
        return LogGamma{parse_profile(node.at("p")), parse_profile(node.at("gamma")), parse_profile(node.at("q")),
                        node.at("s").number()};
    if (kind == "lichnerowicz")
        return Lichnerowicz{parse_profile(node.at("p")), parse_profile(node.at("q")), parse_profile(node.at("r")),
                            parse_profile(node.at("h")), node.at("alpha").number(), node.at("beta").number()};
    if (kind == "manufactured") {
        if (!space) fail(node.path(), "a manufactured family needs a space");
        exact = parse_exact(node.at("exact"));
        try {
            return manufactured_source(*space, *exact);
        } catch (const std::invalid_argument& e) {
            fail(node.path(), e.what());
        }
    }
    fail(node.path() + ".kind", "unknown family '" + kind +
                                    "' (zero, power_sum, log_gamma, lichnerowicz, manufactured)");
}

Scenario parse_scenario(const Node& node, std::set<std::string>& names) {
    node.expect_object({"name", "space", "family", "boundary", "initial", "params", "solver", "grid",
                        "refinement", "checks", "corrupt", "seed", "kernel"});
    Scenario s;
    s.name = node.at("name").string();
    if (s.name.empty() || !std::all_of(s.name.begin(), s.name.end(), [](char c) {
            return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
        }) || s.name.front() == '.')
        fail(node.path() + ".name", "must be a non-empty [A-Za-z0-9_.-] identifier");
    if (!names.insert(s.name).second) fail(node.path() + ".name", "duplicate scenario name '" + s.name + "'");

    const Node checks = node.at("checks");
    for (std::size_t i = 0; i < checks.array_size(); ++i) {
        std::string c = checks.at(i).string();
        if (!is_check_name(c)) fail(checks.at(i).path(), "unknown check '" + c + "'");
        if (std::find(s.checks.begin(), s.checks.end(), c) == s.checks.end()) s.checks.push_back(std::move(c));
    }

    if (node.has("space")) s.space = parse_space(node.at("space"));
    if (node.has("family")) s.family = parse_family(node.at("family"), s.space, s.exact);

    const bool uses_space = s.needs_solution() ||
                            std::find(s.checks.begin(), s.checks.end(), "comparison") != s.checks.end();
    if (uses_space && !s.space) fail(node.path(), "the selected checks need a 'space'");
    if (s.needs_solution() && !s.family) fail(node.path(), "the selected checks need a 'family'");

    if (node.has("grid")) s.grid = positive_int(node.at("grid"), RadialGrid::kMinIntervals, 1 << 20);
    if (node.has("seed")) s.seed = static_cast<std::uint64_t>(node.at("seed").integer());
    if (node.has("corrupt")) s.corrupt = node.at("corrupt").boolean();

    if (node.has("boundary")) {
        const Node b = node.at("boundary");
        b.expect_object({"dirichlet"});
        s.dirichlet = b.at("dirichlet").number();
    }
    if (s.space && s.needs_solution()) {
        if (s.space->closed() && s.dirichlet) fail(node.path() + ".boundary", "the closed sphere takes no boundary");
        if (!s.space->closed() && !s.dirichlet) {
            if (!s.exact) fail(node.path(), "open models need boundary.dirichlet");
            s.dirichlet = s.exact->value(s.space->r_max());
        }
        if (s.dirichlet && !(*s.dirichlet > 0.0)) fail(node.path() + ".boundary.dirichlet", "must be positive");
    }

    if (node.has("initial")) {
        const Node in = node.at("initial");
        in.expect_object({"constant", "random", "amplitude", "level"});
        if (in.has("constant")) {
            s.initial.kind = InitialSpec::Kind::constant;
            s.initial.level = in.at("constant").number();
        } else if (in.has("random") && in.at("random").boolean()) {
            s.initial.kind = InitialSpec::Kind::random;
            s.initial.level = in.number("level", 1.0);
            s.initial.amplitude = in.number("amplitude", 0.3);
            if (!(s.initial.amplitude >= 0.0 && s.initial.amplitude < 1.0))
                fail(in.path() + ".amplitude", "must lie in [0, 1)");
        }
        if (!(s.initial.level > 0.0)) fail(in.path(), "initial level must be positive");
    }

    if (node.has("params")) {
        const Node p = node.at("params");
        p.expect_object({"mu", "eps", "R", "optimize", "c_tol"});
        s.params.optimize = p.has("optimize") && p.at("optimize").boolean();
        s.params.mu = p.number("mu", s.params.mu);
        s.params.eps = p.number("eps", s.params.eps);
        if (p.has("R")) s.params.R = p.at("R").number();
        s.params.c_tol = p.number("c_tol", s.params.c_tol);
        if (!(s.params.mu > 1.0)) fail(p.path() + ".mu", "must exceed 1");
        if (!(s.params.eps > 0.0 && s.params.eps < 1.0)) fail(p.path() + ".eps", "must lie in (0, 1)");
        if (s.params.R && !(*s.params.R > 0.0)) fail(p.path() + ".R", "must be positive");
        if (!(s.params.c_tol >= 0.0)) fail(p.path() + ".c_tol", "must be >= 0");
    }

    auto has_check = [&](const char* c) { return std::find(s.checks.begin(), s.checks.end(), c) != s.checks.end(); };
    if (has_check("local") || has_check("harnack")) {
        if (!s.params.R) fail(node.path() + ".params", "local and harnack checks need R");
        if (2.0 * *s.params.R > s.space->r_max() * (1.0 + 1e-12))
            fail(node.path() + ".params.R", "2R exceeds the domain radius r_max");
    }
    if ((has_check("global") || has_check("liouville")) && !s.space->closed())
        fail(node.path() + ".checks", "global and liouville checks need the closed sphere");
    if (has_check("liouville") && !is_spatially_constant(*s.family))
        fail(node.path() + ".checks", "the liouville check needs x-independent coefficients");
    if (has_check("convergence") && !s.exact) fail(node.path() + ".checks", "convergence needs a manufactured family");

    if (node.has("solver")) {
        const Node sv = node.at("solver");
        sv.expect_object({"newton_tol", "max_iter", "max_halvings", "continuation_steps",
                          "positivity_floor"});
        s.solver.newton_tol = sv.number("newton_tol", s.solver.newton_tol);
        if (sv.has("max_iter")) s.solver.max_iter = positive_int(sv.at("max_iter"), 1, 10000);
        if (sv.has("max_halvings")) s.solver.max_halvings = positive_int(sv.at("max_halvings"), 0, 60);
        if (sv.has("continuation_steps"))
            s.solver.continuation_steps = positive_int(sv.at("continuation_steps"), 1, 10000);
        s.solver.positivity_floor = sv.number("positivity_floor", s.solver.positivity_floor);
        if (!(s.solver.newton_tol > 0.0)) fail(sv.path() + ".newton_tol", "must be positive");
        if (!(s.solver.positivity_floor >= 0.0 && s.solver.positivity_floor < 1.0))
            fail(sv.path() + ".positivity_floor", "must lie in [0, 1)");
    }

    if (node.has("refinement")) {
        const Node rf = node.at("refinement");
        for (std::size_t i = 0; i < rf.array_size(); ++i)
            s.refinement.push_back(positive_int(rf.at(i), RadialGrid::kMinIntervals, 1 << 20));
        if (s.refinement.size() < 2 || !std::is_sorted(s.refinement.begin(), s.refinement.end()))
            fail(rf.path(), "needs at least two increasing grid sizes");
    } else if (has_check("convergence")) {
        s.refinement = {128, 256, 512};
    }

    if (node.has("kernel")) {
        const Node k = node.at("kernel");
        k.expect_object({"samples", "tolerance"});
        if (k.has("samples")) {
            const long long v = k.at("samples").integer();
            if (v < 1) fail(k.at("samples").path(), "must be positive");
            s.kernel.samples = static_cast<std::uint64_t>(v);
        }
        s.kernel.tolerance = k.number("tolerance", s.kernel.tolerance);
    }
    return s;
}

std::string line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    // The parser reports the byte after the offending token.
    if (column > 1) --column;
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

Config parse_config(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        std::string what = e.what();
        const auto pos = what.find("syntax error");
        throw ConfigError(line_column(text, e.byte) + ": " + (pos == std::string::npos ? what : what.substr(pos)));
    }

    const Node root(doc, "config");
    root.expect_object({"seed", "output", "scenarios"});
    Config config;
    if (root.has("seed")) config.seed = static_cast<std::uint64_t>(root.at("seed").integer());
    if (root.has("output")) {
        const Node out = root.at("output");
        out.expect_object({"dir"});
        config.output_dir = out.at("dir").string();
    }
    const Node scenarios = root.at("scenarios");
    std::set<std::string> names;
    for (std::size_t i = 0; i < scenarios.array_size(); ++i)
        config.scenarios.push_back(parse_scenario(scenarios.at(i), names));
    return config;
}

Config load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(path.string() + ": cannot open config file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_config(buffer.str());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

}  // namespace smm
