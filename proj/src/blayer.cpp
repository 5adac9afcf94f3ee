#include "viscsgn/blayer.hpp"

#include <algorithm>
#include <cmath>

#include "viscsgn/error.hpp"
#include "viscsgn/linear_solve.hpp"

namespace viscsgn {

namespace {

int wrap(int i, int n) { return (i % n + n) % n; }

/// Three-point weights on a non-uniform stencil (j-1, j, j+1).
struct Weights {
    double m, c, p;
};

Weights first_derivative(double hm, double hp) {
    return {-hp / (hm * (hm + hp)), (hp - hm) / (hm * hp), hm / (hp * (hm + hp))};
}

Weights second_derivative(double hm, double hp) {
    return {2.0 / (hm * (hm + hp)), -2.0 / (hm * hp), 2.0 / (hp * (hm + hp))};
}

}  // namespace

BoundaryLayer::BoundaryLayer(GridBL grid, RegimeParams params, BLOptions options)
    : grid_(std::move(grid)), params_(params), options_(options) {
    if (!grid_.base().periodic()) throw InvalidArgument("grid", "the layer solver runs on a periodic x-domain");
    if (!params.has_layer()) throw InvalidArgument("gamma_inf", "a boundary layer needs gamma_inf > 0");
    if (std::abs(grid_.gamma_inf() - params.gamma_inf()) > 1e-12 * params.gamma_inf()) {
        throw InvalidArgument("gamma_inf", "layer grid and regime disagree on gamma_inf");
    }
}

BLState BoundaryLayer::initial_state(LayerInit init, std::span<const double> ubar, double time) const {
    BLState s{BLField(grid_), time};
    if (init == LayerInit::zero) return s;
    for (int i = 0; i < grid_.nx(); ++i) {
        for (int j = 1; j < grid_.ngamma(); ++j) {
            s.u(i, j) = init == LayerInit::linear ? grid_.gamma(j) / grid_.gamma_inf() * ubar[i] : ubar[i];
        }
    }
    return s;
}

Field BoundaryLayer::x_derivative_centered(const BLField& u, int j) const {
    const int n = grid_.nx();
    const double inv2h = 0.5 / grid_.base().dx();
    Field d(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) d[i] = (u(wrap(i + 1, n), j) - u(wrap(i - 1, n), j)) * inv2h;
    return d;
}

BLField BoundaryLayer::v_bl(const BLState& state) const {
    const int nx = grid_.nx();
    const int ng = grid_.ngamma();
    BLField ux(nx, ng);
    for (int j = 0; j < ng; ++j) {
        const Field d = x_derivative_centered(state.u, j);
        for (int i = 0; i < nx; ++i) ux(i, j) = d[i];
    }
    BLField v(nx, ng);
    for (int i = 0; i < nx; ++i) {
        cumulative_gamma(ux.column(i), grid_, v.column(i));
        for (double& x : v.column(i)) x *= -params_.mu2();
    }
    return v;
}

BLField BoundaryLayer::explicit_part(const BLState& state, const BLForcing& forcing) const {
    const int nx = grid_.nx();
    const int ng = grid_.ngamma();
    const double h = grid_.base().dx();
    const BLField& u = state.u;
    const bool neumann = options_.matching == Matching::neumann;

    BLField ux(nx, ng);
    for (int j = 0; j < ng; ++j) {
        const Field d = x_derivative_centered(u, j);
        for (int i = 0; i < nx; ++i) ux(i, j) = d[i];
    }
    BLField e(nx, ng);
    std::vector<double> cumulative(static_cast<std::size_t>(ng));
    for (int i = 0; i < nx; ++i) {
        cumulative_gamma(ux.column(i), grid_, cumulative);
        const double forcing_i = -forcing.eta_x[i] - params_.mu2() * forcing.grad_bracket[i];
        const int last = neumann ? ng - 1 : ng - 2;
        for (int j = 1; j <= last; ++j) {
            const double uij = u(i, j);
            double upwind;
            if (uij >= 0.0) {
                upwind = (3.0 * uij - 4.0 * u(wrap(i - 1, nx), j) + u(wrap(i - 2, nx), j)) / (2.0 * h);
            } else {
                upwind = (-3.0 * uij + 4.0 * u(wrap(i + 1, nx), j) - u(wrap(i + 2, nx), j)) / (2.0 * h);
            }
            double ug = 0.0;
            if (j < ng - 1) {
                const Weights w = first_derivative(grid_.dgamma(j - 1), grid_.dgamma(j));
                ug = w.m * u(i, j - 1) + w.c * uij + w.p * u(i, j + 1);
            }
            e(i, j) = -uij * upwind + ug * cumulative[j] + forcing_i;
        }
    }
    return e;
}

namespace {

/// Diffusion u_gg applied to one column; top row handled by the matching type.
void apply_diffusion(const GridBL& grid, bool neumann, std::span<const double> u, std::span<double> out) {
    const int ng = grid.ngamma();
    out[0] = 0.0;
    for (int j = 1; j < ng - 1; ++j) {
        const Weights w = second_derivative(grid.dgamma(j - 1), grid.dgamma(j));
        out[j] = w.m * u[j - 1] + w.c * u[j] + w.p * u[j + 1];
    }
    if (neumann) {
        const double hl = grid.dgamma(ng - 2);
        out[ng - 1] = 2.0 * (u[ng - 2] - u[ng - 1]) / (hl * hl);
    } else {
        out[ng - 1] = 0.0;
    }
}

}  // namespace

BLField BoundaryLayer::prandtl_rhs(const BLState& state, const BLForcing& forcing) const {
    BLField rhs = explicit_part(state, forcing);
    const int ng = grid_.ngamma();
    const bool neumann = options_.matching == Matching::neumann;
    std::vector<double> diff(static_cast<std::size_t>(ng));
    for (int i = 0; i < grid_.nx(); ++i) {
        apply_diffusion(grid_, neumann, state.u.column(i), diff);
        for (int j = 1; j < ng; ++j) rhs(i, j) += diff[j] / params_.R();
    }
    return rhs;
}

void BoundaryLayer::implicit_diffusion(std::span<double> column, std::span<const double> rhs, double top_value,
                                       double dt) const {
    const int ng = grid_.ngamma();
    const double k = 0.5 * dt / params_.R();
    std::vector<double> lower(ng, 0.0), diag(ng, 1.0), upper(ng, 0.0);
    std::copy(rhs.begin(), rhs.end(), column.begin());
    column[0] = 0.0;
    for (int j = 1; j < ng - 1; ++j) {
        const Weights w = second_derivative(grid_.dgamma(j - 1), grid_.dgamma(j));
        lower[j] = -k * w.m;
        diag[j] = 1.0 - k * w.c;
        upper[j] = -k * w.p;
    }
    if (options_.matching == Matching::neumann) {
        const double hl = grid_.dgamma(ng - 2);
        lower[ng - 1] = -k * 2.0 / (hl * hl);
        diag[ng - 1] = 1.0 + k * 2.0 / (hl * hl);
    } else {
        column[ng - 1] = top_value;
    }
    solve_tridiagonal(lower, diag, upper, column);
}

BLState BoundaryLayer::step(const BLState& state, const BLForcing& forcing, double dt) const {
    const int nx = grid_.nx();
    const int ng = grid_.ngamma();
    const bool neumann = options_.matching == Matching::neumann;
    const double inv_r = 1.0 / params_.R();

    // Crank-Nicolson explicit half of the diffusion, shared by both stages.
    BLField base(nx, ng);
    std::vector<double> diff(static_cast<std::size_t>(ng));
    for (int i = 0; i < nx; ++i) {
        apply_diffusion(grid_, neumann, state.u.column(i), diff);
        for (int j = 0; j < ng; ++j) base(i, j) = state.u(i, j) + 0.5 * dt * inv_r * diff[j];
    }

    const BLField e0 = explicit_part(state, forcing);
    BLState stage{BLField(nx, ng), state.time + dt};
    std::vector<double> rhs(static_cast<std::size_t>(ng));
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ng; ++j) rhs[j] = base(i, j) + dt * e0(i, j);
        implicit_diffusion(stage.u.column(i), rhs, forcing.ubar_top[i], dt);
    }

    const BLField e1 = explicit_part(stage, forcing);
    BLState out{BLField(nx, ng), state.time + dt};
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ng; ++j) rhs[j] = base(i, j) + 0.5 * dt * (e0(i, j) + e1(i, j));
        implicit_diffusion(out.u.column(i), rhs, forcing.ubar_top[i], dt);
    }
    return out;
}

Field BoundaryLayer::wall_shear(const BLState& state) const {
    const double h1 = grid_.dgamma(0);
    const double h2 = grid_.dgamma(1);
    const double c0 = -(2.0 * h1 + h2) / (h1 * (h1 + h2));
    const double c1 = (h1 + h2) / (h1 * h2);
    const double c2 = -h1 / (h2 * (h1 + h2));
    Field tau(static_cast<std::size_t>(grid_.nx()));
    for (int i = 0; i < grid_.nx(); ++i) {
        tau[i] = (c0 * state.u(i, 0) + c1 * state.u(i, 1) + c2 * state.u(i, 2)) / params_.R();
    }
    return tau;
}

Field BoundaryLayer::top_velocity(const BLState& state) const { return state.u.row(grid_.ngamma() - 1); }

Field BoundaryLayer::column_integral(const BLState& state) const {
    Field out(static_cast<std::size_t>(grid_.nx()));
    for (int i = 0; i < grid_.nx(); ++i) out[i] = integrate_gamma(state.u.column(i), grid_, grid_.gamma_inf());
    return out;
}

double BoundaryLayer::stable_dt(const BLState& state) const {
    const int nx = grid_.nx();
    const int ng = grid_.ngamma();
    double umax = 0.0;
    for (double v : state.u.data()) umax = std::max(umax, std::abs(v));
    double dgmin = grid_.gamma_inf();
    for (int j = 0; j + 1 < ng; ++j) dgmin = std::min(dgmin, grid_.dgamma(j));
    // |int_0^g u_x| bounds the gamma-advection speed
    double wmax = 0.0;
    std::vector<double> ux(static_cast<std::size_t>(ng)), cum(static_cast<std::size_t>(ng));
    const double inv2h = 0.5 / grid_.base().dx();
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ng; ++j) ux[j] = (state.u(wrap(i + 1, nx), j) - state.u(wrap(i - 1, nx), j)) * inv2h;
        cumulative_gamma(ux, grid_, cum);
        for (double c : cum) wmax = std::max(wmax, std::abs(c));
    }
    const double rate = umax / grid_.base().dx() + wmax / dgmin;
    return rate > 0.0 ? options_.cfl / rate : INFINITY;
}

double BoundaryLayer::kinetic_energy(const BLState& state) const {
    double e = 0.0;
    std::vector<double> sq(static_cast<std::size_t>(grid_.ngamma()));
    for (int i = 0; i < grid_.nx(); ++i) {
        const auto col = state.u.column(i);
        for (std::size_t j = 0; j < sq.size(); ++j) sq[j] = 0.5 * col[j] * col[j];
        e += integrate_gamma(sq, grid_, grid_.gamma_inf());
    }
    return params_.mu2() * e * grid_.base().dx();
}

double BoundaryLayer::dissipation(const BLState& state) const {
    const int ng = grid_.ngamma();
    double d = 0.0;
    for (int i = 0; i < grid_.nx(); ++i) {
        // midpoint rule on each cell
        for (int j = 0; j + 1 < ng; ++j) {
            const double ug = (state.u(i, j + 1) - state.u(i, j)) / grid_.dgamma(j);
            d += ug * ug * grid_.dgamma(j);
        }
    }
    return params_.mu2() * d / params_.R() * grid_.base().dx();
}

Field p_bl(const BulkSolver& bulk, const BulkState& state, std::span<const double> v_surf, const Tendency& tend) {
    const Field dv = bulk.material_derivative_vsurf(state, v_surf, tend);
    const Field acc = bulk.acceleration_bracket(state, tend);
    const Field h = bulk.depth(state);
    const RegimeParams& p = bulk.params();
    Field out(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        out[i] = p.epsilon() * state.eta[i] + p.mu2() * (h[i] * dv[i] + 0.5 * h[i] * h[i] * acc[i]);
    }
    return out;
}

BLForcing make_forcing(const BulkSolver& bulk, const BulkState& state) {
    const BulkClosure c = bulk.closure(state, CouplingData::zero(bulk.grid().nx()));
    BLForcing f;
    f.eta_x = bulk.d1(state.eta);
    for (double& v : f.eta_x) v *= bulk.params().epsilon();
    f.grad_bracket = bulk.d1(c.p_bracket);
    f.ubar_top = state.ubar;
    return f;
}

}  // namespace viscsgn
