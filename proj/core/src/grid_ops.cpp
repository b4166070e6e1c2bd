#include "smm/grid_ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace smm {

RadialGrid::RadialGrid(double r_max, int intervals, bool closed)
    : r_max_(r_max), intervals_(intervals), closed_(closed) {
    if (intervals_ < kMinIntervals)
        throw PreconditionError("RadialGrid: at least 16 intervals are required");
    if (!(r_max_ > 0.0) || !std::isfinite(r_max_))
        throw PreconditionError("RadialGrid: r_max must be positive and finite");
}

RadialGrid RadialGrid::for_space(const ModelSpace& space, int intervals) {
    return RadialGrid(space.r_max(), intervals, space.closed());
}

double RadialGrid::node(std::size_t i) const {
    if (i == static_cast<std::size_t>(intervals_)) return r_max_;
    return r_max_ * static_cast<double>(i) / intervals_;
}

std::size_t RadialGrid::last_index_within(double radius) const {
    if (radius < 0.0) throw PreconditionError("RadialGrid: negative radius");
    const double scaled = radius / h() * (1.0 + 1e-12);
    const auto idx = static_cast<std::size_t>(std::floor(scaled));
    return std::min(idx, size() - 1);
}

Field::Field(RadialGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw PreconditionError("Field: value count does not match the grid");
}

Field::Field(RadialGrid grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

Field Field::sample(const RadialGrid& grid, const std::function<double(double)>& fn) {
    std::vector<double> values(grid.size());
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = fn(grid.node(i));
    return Field(grid, std::move(values));
}

bool Field::positive() const {
    return std::all_of(values_.begin(), values_.end(),
                       [](double v) { return std::isfinite(v) && v > 0.0; });
}

double Field::max_abs() const { return max_abs(0, values_.size() - 1); }

double Field::max_abs(std::size_t first, std::size_t last) const {
    double m = 0.0;
    for (std::size_t i = first; i <= last && i < values_.size(); ++i) m = std::max(m, std::abs(values_[i]));
    return m;
}

DiscreteOperator assemble_witten(const ModelSpace& space, const RadialGrid& grid) {
    if (grid.closed() != space.closed() || std::abs(grid.r_max() - space.r_max()) > 1e-12 * space.r_max())
        throw PreconditionError("assemble_witten: grid does not fit the space");

    const std::size_t size = grid.size();
    const std::size_t last = size - 1;
    const double h = grid.h();
    const double ih2 = 1.0 / (h * h);
    const double n = space.n();

    DiscreteOperator op{grid, space.n(), {}, {}, {}, {}};
    op.dimension = space.n();
    op.lower.assign(size, 0.0);
    op.diag.assign(size, 0.0);
    op.upper.assign(size, 0.0);
    op.drift.assign(size, 0.0);

    // Pole row: Delta_f u(0) = n u''(0), u''(0) from the even extension.
    op.diag[0] = -2.0 * n * ih2;
    op.upper[0] = 2.0 * n * ih2;

    for (std::size_t i = 1; i < last; ++i) {
        const double d = drift_laplacian_radial(space, grid.node(i));
        op.drift[i] = d;
        op.lower[i] = ih2 - d / (2.0 * h);
        op.diag[i] = -2.0 * ih2;
        op.upper[i] = ih2 + d / (2.0 * h);
    }

    if (grid.closed()) {
        op.far_closure = Closure::pole;
        op.lower[last] = 2.0 * n * ih2;
        op.diag[last] = -2.0 * n * ih2;
    } else {
        op.far_closure = Closure::one_sided;
        const double d = drift_laplacian_radial(space, grid.node(last));
        op.drift[last] = d;
        op.far_stencil = {2.0 * ih2 + 3.0 * d / (2.0 * h), -5.0 * ih2 - 4.0 * d / (2.0 * h),
                          4.0 * ih2 + d / (2.0 * h), -ih2};
        op.diag[last] = op.far_stencil[0];
        op.lower[last] = op.far_stencil[1];
    }
    return op;
}

std::vector<double> DiscreteOperator::apply(std::span<const double> u) const {
    const std::size_t size = grid.size();
    if (u.size() != size) throw PreconditionError("DiscreteOperator::apply: size mismatch");
    const std::size_t last = size - 1;
    const double h = grid.h();
    const double ih2 = 1.0 / (h * h);
    std::vector<double> out(size);

    // Differences first: d+ and d- are exact for nearby values, which keeps the
    // rounding floor of the residual near eps * |u''| instead of eps * |u| / h^2.
    out[0] = 2.0 * dimension * (u[1] - u[0]) * ih2;
    for (std::size_t i = 1; i < last; ++i) {
        const double dp = u[i + 1] - u[i];
        const double dm = u[i] - u[i - 1];
        out[i] = (dp - dm) * ih2 + drift[i] * (dp + dm) / (2.0 * h);
    }
    if (far_closure == Closure::pole) {
        out[last] = 2.0 * dimension * (u[last - 1] - u[last]) * ih2;
    } else {
        const double d0 = u[last] - u[last - 1];
        const double d1 = u[last - 1] - u[last - 2];
        const double d2 = u[last - 2] - u[last - 3];
        out[last] = (2.0 * d0 - 3.0 * d1 + d2) * ih2 + drift[last] * (3.0 * d0 - d1) / (2.0 * h);
    }
    return out;
}

Field DiscreteOperator::apply(const Field& u) const {
    if (!(u.grid() == grid)) throw PreconditionError("DiscreteOperator::apply: grid mismatch");
    return Field(grid, apply(u.values()));
}

Field derivative(const Field& u) {
    const RadialGrid& grid = u.grid();
    const std::size_t last = grid.size() - 1;
    const double h = grid.h();
    Field out(grid);
    out[0] = 0.0;
    for (std::size_t i = 1; i < last; ++i) out[i] = (u[i + 1] - u[i - 1]) / (2.0 * h);
    if (grid.closed())
        out[last] = 0.0;
    else
        out[last] = (3.0 * (u[last] - u[last - 1]) - (u[last - 1] - u[last - 2])) / (2.0 * h);
    return out;
}

Field second_derivative(const Field& u) {
    const RadialGrid& grid = u.grid();
    const std::size_t last = grid.size() - 1;
    const double ih2 = 1.0 / (grid.h() * grid.h());
    Field out(grid);
    out[0] = 2.0 * (u[1] - u[0]) * ih2;
    for (std::size_t i = 1; i < last; ++i) out[i] = ((u[i + 1] - u[i]) - (u[i] - u[i - 1])) * ih2;
    if (grid.closed()) {
        out[last] = 2.0 * (u[last - 1] - u[last]) * ih2;
    } else {
        const double d0 = u[last] - u[last - 1];
        const double d1 = u[last - 1] - u[last - 2];
        const double d2 = u[last - 2] - u[last - 3];
        out[last] = (2.0 * d0 - 3.0 * d1 + d2) * ih2;
    }
    return out;
}

Field gradient_norm(const Field& u) {
    Field g = derivative(u);
    for (double& v : g.values()) v = std::abs(v);
    return g;
}

namespace {

void require_fit(const Field& u, const ModelSpace& space, const char* what) {
    if (u.grid().closed() != space.closed() ||
        std::abs(u.grid().r_max() - space.r_max()) > 1e-12 * space.r_max())
        throw PreconditionError(std::string(what) + ": field grid does not fit the space");
}

// warp'/warp at node i, 0 at poles (callers special-case poles).
double warp_ratio(const ModelSpace& space, double r) {
    if (space.is_pole(r)) return 0.0;
    return space.warp().d1(r) / space.warp().value(r);
}

}  // namespace

Field hessian_norm_sq_radial(const Field& u, const ModelSpace& space) {
    require_fit(u, space, "hessian_norm_sq_radial");
    const Field du = derivative(u);
    const Field ddu = second_derivative(u);
    const double n = space.n();
    Field out(u.grid());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double r = u.grid().node(i);
        if (space.is_pole(r)) {
            out[i] = n * ddu[i] * ddu[i];
        } else {
            const double t = warp_ratio(space, r) * du[i];
            out[i] = ddu[i] * ddu[i] + (n - 1.0) * t * t;
        }
    }
    return out;
}

IdentityResidual check_h_equation(const Field& u, const NonlinearityFamily& family,
                                  const ModelSpace& space) {
    require_fit(u, space, "check_h_equation");
    if (!u.positive()) throw PositivityError("check_h_equation: u must be positive");
    const RadialGrid& grid = u.grid();
    Field h(grid);
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = std::log(u[i]);

    const DiscreteOperator op = assemble_witten(space, grid);
    const Field lap = op.apply(h);
    const Field dh = derivative(h);
    Field residual(grid);
    for (std::size_t i = 0; i < residual.size(); ++i)
        residual[i] = lap[i] + dh[i] * dh[i] + sigma_value(family, grid.node(i), u[i]) / u[i];
    return {std::move(residual), 0, grid.size() - 1};
}

IdentityResidual check_bochner_identity(const Field& h, const ModelSpace& space, double mu,
                                        const NonlinearityFamily& family) {
    require_fit(h, space, "check_bochner_identity");
    if (!(space.m() > space.n()))
        throw PreconditionError("check_bochner_identity: requires m > n");
    if (!(mu >= 1.0)) throw PreconditionError("check_bochner_identity: requires mu >= 1");

    const RadialGrid& grid = h.grid();
    const std::size_t size = grid.size();
    const double m_minus_n = space.m() - space.n();

    const DiscreteOperator op = assemble_witten(space, grid);
    const Field dh = derivative(h);
    const Field hess = hessian_norm_sq_radial(h, space);

    // G = e^{-h} Sigma(x, e^h); H = |grad h|^2 + mu G.
    Field g(grid);
    Field big_h(grid);
    std::vector<SigmaJet> jets(size);
    std::vector<double> u(size);
    for (std::size_t i = 0; i < size; ++i) {
        u[i] = std::exp(h[i]);
        jets[i] = sigma_jet(family, grid.node(i), u[i]);
        g[i] = jets[i].sigma / u[i];
        big_h[i] = dh[i] * dh[i] + mu * g[i];
    }
    const Field lap_h = op.apply(big_h);
    const Field lap_g = op.apply(g);
    const Field d_big_h = derivative(big_h);

    const std::size_t last = grid.closed() ? size - 1 : size - 3;
    Field residual(grid);
    for (std::size_t i = 0; i <= last; ++i) {
        const double r = grid.node(i);
        const double hp = dh[i];
        double rhs = 2.0 * hess[i] + mu * lap_g[i];
        if (!space.is_pole(r)) {
            const double df = space.weight().d1(r);
            const double lambda_radial = ricci_fm_eigenvalues(space, r).radial;
            // Total radial derivative of Sigma(r, e^{h(r)}).
            const double d_sigma = jets[i].sigma_x + u[i] * jets[i].sigma_u * hp;
            rhs += 2.0 * (df * hp) * (df * hp) / m_minus_n;
            rhs += -2.0 * hp * d_big_h[i];
            rhs += 2.0 * lambda_radial * hp * hp;
            rhs += -2.0 * (mu - 1.0) * g[i] * hp * hp;
            rhs += 2.0 * (mu - 1.0) * hp * d_sigma / u[i];
        }
        residual[i] = lap_h[i] - rhs;
    }
    return {std::move(residual), 0, last};
}

Field cs_chain_slack(const Field& h, const ModelSpace& space) {
    require_fit(h, space, "cs_chain_slack");
    if (!(space.m() > space.n())) throw PreconditionError("cs_chain_slack: requires m > n");
    const DiscreteOperator op = assemble_witten(space, h.grid());
    const Field lap = op.apply(h);
    const Field dh = derivative(h);
    const Field hess = hessian_norm_sq_radial(h, space);
    Field slack(h.grid());
    for (std::size_t i = 0; i < slack.size(); ++i) {
        const double r = h.grid().node(i);
        const double w = space.is_pole(r) ? 0.0 : space.weight().d1(r) * dh[i];
        slack[i] = hess[i] + w * w / (space.m() - space.n()) - lap[i] * lap[i] / space.m();
    }
    return slack;
}

std::vector<double> volume_weights(const ModelSpace& space, const RadialGrid& grid) {
    std::vector<double> w(grid.size());
    const double h = grid.h();
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double r = grid.node(i);
        const double phi = space.is_pole(r) ? 0.0 : space.warp().value(r);
        w[i] = std::pow(phi, space.n() - 1) * std::exp(-space.weight().value(r)) * h;
    }
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
}

}  // namespace smm
