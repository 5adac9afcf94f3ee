#include "viscsgn/bulk.hpp"

#include <algorithm>
#include <cmath>

#include "viscsgn/error.hpp"
#include "viscsgn/linear_solve.hpp"

namespace viscsgn {

namespace {

int wrap(int i, int n) { return (i % n + n) % n; }

}  // namespace

BulkSolver::BulkSolver(Grid1D grid, RegimeParams params, BulkOptions options)
    : grid_(grid), params_(params), options_(options) {
    if (!grid.periodic()) throw InvalidArgument("grid", "the bulk solver runs on a periodic x-domain");
    if (options.stencil_order != 2 && options.stencil_order != 4) {
        throw InvalidArgument("stencil_order", "must be 2 or 4");
    }
    if (!(options.cfl > 0.0)) throw InvalidArgument("cfl", "must be positive");
}

Field BulkSolver::depth(const BulkState& state) const { return viscsgn::depth(state, params_); }

Field BulkSolver::d1(std::span<const double> f) const {
    return options_.stencil_order == 4 ? ddx4(f, grid_) : ddx(f, grid_);
}

Field BulkSolver::d2(std::span<const double> f) const {
    const int n = grid_.nx();
    const double h2 = grid_.dx() * grid_.dx();
    Field out(f.size());
    auto at = [&](int i) { return f[static_cast<std::size_t>(wrap(i, n))]; };
    if (options_.stencil_order == 4) {
        for (int i = 0; i < n; ++i) {
            out[i] = (-at(i + 2) + 16.0 * at(i + 1) - 30.0 * at(i) + 16.0 * at(i - 1) - at(i - 2)) / (12.0 * h2);
        }
    } else {
        for (int i = 0; i < n; ++i) out[i] = (at(i + 1) - 2.0 * at(i) + at(i - 1)) / h2;
    }
    return out;
}

// (a w_x)_x in flux form: -G^T diag(a_half) G, symmetric by construction.
Field BulkSolver::divergence_flux(std::span<const double> a, std::span<const double> w) const {
    const int n = grid_.nx();
    const double h = grid_.dx();
    auto A = [&](int i) { return a[static_cast<std::size_t>(wrap(i, n))]; };
    auto W = [&](int i) { return w[static_cast<std::size_t>(wrap(i, n))]; };
    Field flux(static_cast<std::size_t>(n));  // flux[i] lives at i + 1/2
    Field out(static_cast<std::size_t>(n));
    if (options_.stencil_order == 4) {
        for (int i = 0; i < n; ++i) {
            const double ah = (-A(i - 1) + 9.0 * A(i) + 9.0 * A(i + 1) - A(i + 2)) / 16.0;
            const double gh = (W(i - 1) - 27.0 * W(i) + 27.0 * W(i + 1) - W(i + 2)) / (24.0 * h);
            flux[i] = ah * gh;
        }
        auto F = [&](int i) { return flux[static_cast<std::size_t>(wrap(i, n))]; };
        for (int i = 0; i < n; ++i) {
            out[i] = (F(i - 2) - 27.0 * F(i - 1) + 27.0 * F(i) - F(i + 1)) / (24.0 * h);
        }
    } else {
        for (int i = 0; i < n; ++i) flux[i] = 0.5 * (A(i) + A(i + 1)) * (W(i + 1) - W(i)) / h;
        for (int i = 0; i < n; ++i) out[i] = (flux[i] - flux[wrap(i - 1, n)]) / h;
    }
    return out;
}

Field BulkSolver::v_surface(const BulkState& state, std::span<const double> mass_flux_top) const {
    const Field h = depth(state);
    Field hu(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) hu[i] = h[i] * state.ubar[i];
    const Field dhu = d1(hu);
    const Field deta = d1(state.eta);
    Field v(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        v[i] = -dhu[i] + params_.epsilon() * state.ubar[i] * deta[i] + mass_flux_top[i];
    }
    return v;
}

Field BulkSolver::vertical_velocity(const BulkState& state, double y, std::span<const double> v_surf) const {
    const Field h = depth(state);
    const double y_bottom = -1.0 + params_.mu2() * params_.gamma_inf();
    const double tol = 1e-12;
    const Field ux = d1(state.ubar);
    Field v(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        const double surface = params_.epsilon() * state.eta[i];
        if (y < y_bottom - tol || y > surface + tol) {
            throw InvalidArgument("y", "outside the Euler column at node " + std::to_string(i));
        }
        v[i] = v_surf[i] + (surface - y) * ux[i];
    }
    return v;
}

Field BulkSolver::mass_rhs(const BulkState& state, std::span<const double> mass_flux_top) const {
    const Field h = depth(state);
    Field hu(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) hu[i] = h[i] * state.ubar[i];
    Field eta_t = d1(hu);
    for (std::size_t i = 0; i < h.size(); ++i) {
        eta_t[i] = (mass_flux_top[i] - eta_t[i]) / params_.epsilon();
    }
    return eta_t;
}

Field BulkSolver::momentum_rhs(const BulkState& state, const CouplingData& coupling) const {
    const Field h = depth(state);
    const std::size_t n = h.size();
    const Field& u = state.ubar;
    const Field ux = d1(u);
    const Field uxx = d2(u);
    const Field hx = d1(h);

    Field bracket(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double last = options_.variant == BracketVariant::ux_squared ? ux[i] * ux[i] : u[i] * ux[i];
        bracket[i] = h[i] * h[i] * h[i] / 3.0 * (u[i] * uxx[i] - last);
    }
    const Field dbracket = d1(bracket);

    Field rhs(n);
    const double mu2 = params_.mu2();
    for (std::size_t i = 0; i < n; ++i) {
        rhs[i] = -h[i] * u[i] * ux[i] - h[i] * hx[i] - coupling.slip_deficit[i] * coupling.mass_flux_top[i] +
                 mu2 * dbracket[i];
    }
    return rhs;
}

Field BulkSolver::dispersive_operator(const BulkState& state, std::span<const double> w) const {
    const Field h = depth(state);
    Field a(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) a[i] = h[i] * h[i] * h[i] / 3.0;
    Field out = divergence_flux(a, w);
    for (std::size_t i = 0; i < h.size(); ++i) out[i] = h[i] * w[i] - params_.mu2() * out[i];
    return out;
}

Field BulkSolver::solve_dispersive(const BulkState& state, std::span<const double> rhs) const {
    const Field h = depth(state);
    const int n = grid_.nx();
    const double mu2 = params_.mu2();
    const double h2 = grid_.dx() * grid_.dx();

    // Second-order operator: exact target for order 2, preconditioner for order 4.
    Field lower(static_cast<std::size_t>(n)), diag(static_cast<std::size_t>(n)), upper(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        auto a = [&](int k) {
            const double hk = h[static_cast<std::size_t>(wrap(k, n))];
            return hk * hk * hk / 3.0;
        };
        const double a_minus = 0.5 * (a(i - 1) + a(i));
        const double a_plus = 0.5 * (a(i) + a(i + 1));
        lower[i] = -mu2 * a_minus / h2;
        upper[i] = -mu2 * a_plus / h2;
        diag[i] = h[i] + mu2 * (a_minus + a_plus) / h2;
    }
    auto precondition = [&](std::span<const double> r) {
        Field z(r.begin(), r.end());
        solve_cyclic_tridiagonal(lower, diag, upper, z);
        return z;
    };
    if (options_.stencil_order == 2 || mu2 == 0.0) {
        if (mu2 == 0.0) {
            Field w(rhs.begin(), rhs.end());
            for (std::size_t i = 0; i < w.size(); ++i) w[i] /= h[i];
            return w;
        }
        return precondition(rhs);
    }

    // Preconditioned conjugate gradients on the wide symmetric stencil.
    Field x = precondition(rhs);
    Field r(rhs.begin(), rhs.end());
    const Field lx = dispersive_operator(state, x);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= lx[i];
    Field z = precondition(r);
    Field p = z;
    double rz = dot(r, z);
    const double target = 1e-15 * std::max(max_abs(rhs), 1e-300);
    for (int it = 0; it < 200 && max_abs(r) > target; ++it) {
        const Field lp = dispersive_operator(state, p);
        const double alpha = rz / dot(p, lp);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * lp[i];
        }
        z = precondition(r);
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < p.size(); ++i) p[i] = z[i] + beta * p[i];
    }
    return x;
}

Tendency BulkSolver::tendency(const BulkState& state, const CouplingData& coupling) const {
    Tendency t;
    t.eta_t = mass_rhs(state, coupling.mass_flux_top);
    t.ubar_t = solve_dispersive(state, momentum_rhs(state, coupling));
    return t;
}

Field BulkSolver::material_derivative_vsurf(const BulkState& state, std::span<const double> v_surf,
                                            const Tendency& tend) const {
    const Field h = depth(state);
    const std::size_t n = h.size();
    const double eps = params_.epsilon();
    Field flux_t(n);
    for (std::size_t i = 0; i < n; ++i) {
        flux_t[i] = eps * tend.eta_t[i] * state.ubar[i] + h[i] * tend.ubar_t[i];
    }
    const Field dflux_t = d1(flux_t);
    const Field deta = d1(state.eta);
    const Field deta_t = d1(tend.eta_t);
    const Field dv = d1(v_surf);
    Field out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double v_t = -dflux_t[i] + eps * (tend.ubar_t[i] * deta[i] + state.ubar[i] * deta_t[i]);
        out[i] = v_t + state.ubar[i] * dv[i];
    }
    return out;
}

Field BulkSolver::acceleration_bracket(const BulkState& state, const Tendency& tend) const {
    const Field& u = state.ubar;
    const Field ux = d1(u);
    const Field uxx = d2(u);
    const Field uxt = d1(tend.ubar_t);
    Field a(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double last = options_.variant == BracketVariant::ux_squared ? ux[i] * ux[i] : u[i] * ux[i];
        a[i] = uxt[i] + u[i] * uxx[i] - last;
    }
    return a;
}

Field BulkSolver::pressure(const BulkState& state, std::span<const double> y, std::span<const double> v_surf,
                           const Tendency& tend) const {
    const Field dv = material_derivative_vsurf(state, v_surf, tend);
    const Field acc = acceleration_bracket(state, tend);
    Field p(dv.size());
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double surface = params_.epsilon() * state.eta[i];
        const double s = y[i] - surface;
        p[i] = surface - params_.mu2() * (s * dv[i] - 0.5 * s * s * acc[i]);
    }
    return p;
}

Field BulkSolver::pressure(const BulkState& state, double y, std::span<const double> v_surf,
                           const Tendency& tend) const {
    return pressure(state, Field(state.eta.size(), y), v_surf, tend);
}

BulkClosure BulkSolver::closure(const BulkState& state, const CouplingData& coupling) const {
    BulkClosure c;
    c.v_surf = v_surface(state, coupling.mass_flux_top);
    const Tendency tend = tendency(state, coupling);
    const Field dv = material_derivative_vsurf(state, c.v_surf, tend);
    const Field acc = acceleration_bracket(state, tend);
    const Field h = depth(state);
    c.p_bracket.resize(h.size());
    c.slip_term.resize(h.size());
    for (std::size_t i = 0; i < h.size(); ++i) {
        c.p_bracket[i] = h[i] * dv[i] + 0.5 * h[i] * h[i] * acc[i];
        c.slip_term[i] = coupling.slip_deficit[i] * coupling.mass_flux_top[i];
    }
    return c;
}

BulkState BulkSolver::step(const BulkState& state, const CouplingData& coupling, double dt) const {
    const std::size_t n = state.eta.size();
    auto stage = [&](const Tendency& k, double w) {
        BulkState s{Field(n), Field(n), state.time + w * dt};
        for (std::size_t i = 0; i < n; ++i) {
            s.eta[i] = state.eta[i] + w * dt * k.eta_t[i];
            s.ubar[i] = state.ubar[i] + w * dt * k.ubar_t[i];
        }
        return s;
    };
    BulkState out{Field(n), Field(n), state.time + dt};
    const Tendency k1 = tendency(state, coupling);
    if (options_.time_scheme == TimeScheme::rk4) {
        const Tendency k2 = tendency(stage(k1, 0.5), coupling);
        const Tendency k3 = tendency(stage(k2, 0.5), coupling);
        const Tendency k4 = tendency(stage(k3, 1.0), coupling);
        for (std::size_t i = 0; i < n; ++i) {
            out.eta[i] = state.eta[i] + dt / 6.0 * (k1.eta_t[i] + 2.0 * k2.eta_t[i] + 2.0 * k3.eta_t[i] + k4.eta_t[i]);
            out.ubar[i] =
                state.ubar[i] + dt / 6.0 * (k1.ubar_t[i] + 2.0 * k2.ubar_t[i] + 2.0 * k3.ubar_t[i] + k4.ubar_t[i]);
        }
        return out;
    }
    const Tendency k2 = tendency(stage(k1, 1.0), coupling);
    for (std::size_t i = 0; i < n; ++i) {
        out.eta[i] = state.eta[i] + 0.5 * dt * (k1.eta_t[i] + k2.eta_t[i]);
        out.ubar[i] = state.ubar[i] + 0.5 * dt * (k1.ubar_t[i] + k2.ubar_t[i]);
    }
    return out;
}

double BulkSolver::stable_dt(const BulkState& state) const {
    const Field h = depth(state);
    double speed = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) speed = std::max(speed, std::abs(state.ubar[i]) + std::sqrt(h[i]));
    return options_.cfl * grid_.dx() / speed;
}

}  // namespace viscsgn
