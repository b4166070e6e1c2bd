#include "smm/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace smm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// g(u), g'(u), g''(u) for one u-dependence.
struct UJet {
    double g;
    double g1;
    double g2;
};

UJet power_jet(double u, double a) {
    if (a == 0.0) return {1.0, 0.0, 0.0};
    if (a == 1.0) return {u, 1.0, 0.0};
    const double ua = std::pow(u, a);
    return {ua, a * ua / u, a * (a - 1.0) * ua / (u * u)};
}

UJet u_log_u_jet(double u) {
    const double l = std::log(u);
    return {u * l, l + 1.0, 1.0 / u};
}

UJet u_gamma_log_u_jet(const ScalarFn& gamma, double u) {
    const double l = std::log(u);
    const double g = gamma.value(l);
    const double g1 = gamma.d1(l);
    const double g2 = gamma.d2(l);
    return {u * g, g + g1, (g1 + g2) / u};
}

void accumulate(SigmaJet& jet, const ScalarFn& coef, double r, const UJet& uj) {
    const double c = coef.value(r);
    const double c1 = coef.d1(r);
    const double c2 = coef.d2(r);
    jet.sigma += c * uj.g;
    jet.sigma_u += c * uj.g1;
    jet.sigma_uu += c * uj.g2;
    jet.sigma_x += c1 * uj.g;
    jet.sigma_xu += c1 * uj.g1;
    jet.sigma_xx += c2 * uj.g;
}

void require_positive(double u) {
    if (!(u > 0.0) || !std::isfinite(u))
        throw PositivityError("nonlinearity: evaluation requires finite u > 0");
}

}  // namespace

std::string describe(const NonlinearityFamily& family) {
    std::ostringstream os;
    std::visit(overloaded{
                   [&](const PowerSum& f) {
                       os << "PowerSum{";
                       for (std::size_t j = 0; j < f.terms.size(); ++j)
                           os << (j ? ", " : "") << "(" << f.terms[j].coef.label << ", "
                              << f.terms[j].exponent << ")";
                       os << "}";
                   },
                   [&](const LogGamma& f) {
                       os << "LogGamma{p=" << f.p.label << ", gamma=" << f.gamma.label
                          << ", q=" << f.q.label << ", s=" << f.s << "}";
                   },
                   [&](const Lichnerowicz& f) {
                       os << "Lichnerowicz{p=" << f.p.label << ", q=" << f.q.label
                          << ", r=" << f.r_coef.label << ", h=" << f.h_coef.label
                          << ", alpha=" << f.alpha << ", beta=" << f.beta << "}";
                   },
                   [&](const SpatialSource& f) { os << "SpatialSource{" << f.source.label << "}"; },
               },
               family);
    return os.str();
}

bool is_spatially_constant(const NonlinearityFamily& family) {
    return std::visit(
        overloaded{
            [](const PowerSum& f) {
                return std::all_of(f.terms.begin(), f.terms.end(),
                                   [](const PowerTerm& t) { return t.coef.constant; });
            },
            [](const LogGamma& f) { return f.p.constant && f.q.constant; },
            [](const Lichnerowicz& f) {
                return f.p.constant && f.q.constant && f.r_coef.constant && f.h_coef.constant;
            },
            [](const SpatialSource& f) { return f.source.constant; },
        },
        family);
}

SigmaJet sigma_jet(const NonlinearityFamily& family, double r, double u) {
    require_positive(u);
    SigmaJet jet;
    std::visit(overloaded{
                   [&](const PowerSum& f) {
                       for (const auto& term : f.terms) accumulate(jet, term.coef, r, power_jet(u, term.exponent));
                   },
                   [&](const LogGamma& f) {
                       accumulate(jet, f.p, r, u_gamma_log_u_jet(f.gamma, u));
                       accumulate(jet, f.q, r, power_jet(u, f.s));
                   },
                   [&](const Lichnerowicz& f) {
                       accumulate(jet, f.p, r, power_jet(u, f.alpha));
                       accumulate(jet, f.q, r, power_jet(u, f.beta));
                       accumulate(jet, f.r_coef, r, u_log_u_jet(u));
                       accumulate(jet, f.h_coef, r, power_jet(u, 1.0));
                   },
                   [&](const SpatialSource& f) { accumulate(jet, f.source, r, {1.0, 0.0, 0.0}); },
               },
               family);
    return jet;
}

double sigma_value(const NonlinearityFamily& family, double r, double u) {
    require_positive(u);
    return std::visit(
        overloaded{
            [&](const PowerSum& f) {
                double s = 0.0;
                for (const auto& term : f.terms)
                    s += term.coef.value(r) * (term.exponent == 0.0 ? 1.0 : std::pow(u, term.exponent));
                return s;
            },
            [&](const LogGamma& f) {
                return f.p.value(r) * u * f.gamma.value(std::log(u)) + f.q.value(r) * std::pow(u, f.s);
            },
            [&](const Lichnerowicz& f) {
                return f.p.value(r) * std::pow(u, f.alpha) + f.q.value(r) * std::pow(u, f.beta) +
                       f.r_coef.value(r) * u * std::log(u) + f.h_coef.value(r) * u;
            },
            [&](const SpatialSource& f) { return f.source.value(r); },
        },
        family);
}

double sigma_x_drift_laplacian(const NonlinearityFamily& family, const ModelSpace& space, double r,
                               double u) {
    const SigmaJet jet = sigma_jet(family, r, u);
    if (space.is_pole(r)) {
        if (std::abs(jet.sigma_x) > 1e-9 * (1.0 + std::abs(jet.sigma)))
            throw PreconditionError("sigma_x_drift_laplacian: coefficient not smooth at the pole");
        return space.n() * jet.sigma_xx;
    }
    return jet.sigma_xx + drift_laplacian_radial(space, r) * jet.sigma_x;
}

const char* to_string(VerdictKind kind) {
    switch (kind) {
        case VerdictKind::holds: return "holds";
        case VerdictKind::fails: return "fails";
        case VerdictKind::unknown: return "unknown";
    }
    return "unknown";
}

namespace {

std::vector<double> log_grid(URange range, int points) {
    if (!(range.lo > 0.0) || !(range.hi >= range.lo))
        throw PreconditionError("liouville_conditions: u-range must satisfy 0 < lo <= hi");
    if (range.hi == range.lo || points < 2) return {range.lo};
    std::vector<double> grid(static_cast<std::size_t>(points));
    const double a = std::log(range.lo);
    const double b = std::log(range.hi);
    for (int i = 0; i < points; ++i) grid[i] = std::exp(a + (b - a) * i / (points - 1));
    grid.front() = range.lo;
    grid.back() = range.hi;
    return grid;
}

// Condition values (Sigma, u Sigma_u - Sigma, mu u^2 Sigma_uu - u Sigma_u + Sigma)
// with a magnitude scale used to absorb rounding in the sign test.
struct ConditionSample {
    double value[3];
    double scale;
};

// sign: +1 means value must be >= 0, -1 means <= 0.
constexpr int kConditionSign[3] = {+1, -1, +1};

LiouvilleVerdict scan(const std::vector<double>& grid, auto&& sample) {
    for (double u : grid) {
        const ConditionSample s = sample(u);
        for (int c = 0; c < 3; ++c) {
            const double signed_value = kConditionSign[c] * s.value[c];
            if (signed_value < -1e-12 * s.scale) {
                LiouvilleVerdict v;
                v.kind = VerdictKind::fails;
                v.failed_condition = c + 1;
                v.witness_u = u;
                v.witness_value = s.value[c];
                return v;
            }
        }
    }
    return {};
}

struct MergedTerm {
    double p;
    double a;
};

std::vector<MergedTerm> merge_power_terms(const PowerSum& f) {
    std::map<double, double> by_exponent;
    for (const auto& t : f.terms) by_exponent[t.exponent] += t.coef.value(0.0);
    std::vector<MergedTerm> merged;
    for (const auto& [a, p] : by_exponent)
        if (p != 0.0) merged.push_back({p, a});
    return merged;
}

LiouvilleVerdict power_sum_conditions(const PowerSum& f, double mu, const std::vector<double>& grid) {
    const auto terms = merge_power_terms(f);
    bool certified[3] = {true, true, true};
    for (const auto& t : terms) {
        const double coef[3] = {t.p, t.p * (t.a - 1.0), t.p * (t.a - 1.0) * (mu * t.a - 1.0)};
        for (int c = 0; c < 3; ++c)
            if (kConditionSign[c] * coef[c] < 0.0) certified[c] = false;
    }
    if (certified[0] && certified[1] && certified[2]) {
        LiouvilleVerdict v;
        v.kind = VerdictKind::holds;
        v.note = terms.empty() ? "Sigma vanishes identically" : "termwise sign certificate";
        return v;
    }
    LiouvilleVerdict v = scan(grid, [&](double u) {
        ConditionSample s{{0.0, 0.0, 0.0}, 0.0};
        for (const auto& t : terms) {
            const double ua = t.a == 0.0 ? 1.0 : std::pow(u, t.a);
            s.value[0] += t.p * ua;
            s.value[1] += t.p * (t.a - 1.0) * ua;
            s.value[2] += t.p * (t.a - 1.0) * (mu * t.a - 1.0) * ua;
            s.scale += std::abs(t.p * ua) * (1.0 + std::abs(t.a)) * (1.0 + mu * std::abs(t.a));
        }
        return s;
    });
    if (v.kind == VerdictKind::unknown) v.note = "grid-consistent; no termwise certificate";
    return v;
}

}  // namespace

LiouvilleVerdict liouville_conditions(const NonlinearityFamily& family, double mu, URange range,
                                      int grid_points) {
    if (!(mu > 1.0)) throw PreconditionError("liouville_conditions: mu must exceed 1");
    if (!is_spatially_constant(family))
        throw PreconditionError("liouville_conditions: Sigma must not depend on x");
    const auto grid = log_grid(range, grid_points);

    if (const auto* ps = std::get_if<PowerSum>(&family)) return power_sum_conditions(*ps, mu, grid);

    LiouvilleVerdict v = scan(grid, [&](double u) {
        const SigmaJet j = sigma_jet(family, 0.0, u);
        ConditionSample s;
        s.value[0] = j.sigma;
        s.value[1] = u * j.sigma_u - j.sigma;
        s.value[2] = mu * u * u * j.sigma_uu - u * j.sigma_u + j.sigma;
        s.scale = std::abs(j.sigma) + std::abs(u * j.sigma_u) + mu * std::abs(u * u * j.sigma_uu);
        return s;
    });
    if (v.kind == VerdictKind::unknown) v.note = "grid-consistent; not certified for this family";
    return v;
}

std::optional<MuSearchResult> liouville_mu_search(const NonlinearityFamily& family, URange range,
                                                  double mu_max, int grid_points) {
    if (!(mu_max > 1.0)) throw PreconditionError("liouville_mu_search: mu_max must exceed 1");
    if (grid_points < 2) throw PreconditionError("liouville_mu_search: need at least two grid points");

    double window = mu_max;
    if (const auto* ps = std::get_if<PowerSum>(&family)) {
        for (const auto& t : merge_power_terms(*ps))
            if (t.p > 0.0 && t.a > 0.0 && t.a < 1.0) window = std::min(window, 1.0 / t.a);
    }

    const double lo = -3.0;
    const double hi = std::log10(mu_max - 1.0);
    std::optional<MuSearchResult> fallback;
    for (int i = 0; i < grid_points; ++i) {
        const double mu = 1.0 + std::pow(10.0, lo + (hi - lo) * i / (grid_points - 1));
        if (mu >= window) break;
        LiouvilleVerdict v = liouville_conditions(family, mu, range);
        if (v.kind == VerdictKind::holds) return MuSearchResult{mu, v};
        if (v.kind == VerdictKind::unknown && !fallback) fallback = MuSearchResult{mu, v};
    }
    return fallback;
}

bool has_no_positive_zeros(const NonlinearityFamily& family) {
    const auto* ps = std::get_if<PowerSum>(&family);
    if (!ps || !is_spatially_constant(family)) return false;
    const auto terms = merge_power_terms(*ps);
    bool any_positive = false;
    for (const auto& t : terms) {
        if (t.p < 0.0) return false;
        any_positive = any_positive || t.p > 0.0;
    }
    return any_positive;
}

}  // namespace smm
