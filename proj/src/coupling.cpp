#include "viscsgn/coupling.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

#include "viscsgn/error.hpp"

namespace viscsgn {

CouplingData assemble_coupling(const BulkState& bulk, const BLState& layer_state, const BoundaryLayer& layer,
                               double time_tolerance) {
    if (std::abs(bulk.time - layer_state.time) > time_tolerance) {
        throw Error("coupling: bulk time " + std::to_string(bulk.time) + " and layer time " +
                    std::to_string(layer_state.time) + " differ by more than the tolerance");
    }
    const int nx = layer.grid().nx();
    if (static_cast<int>(bulk.ubar.size()) != nx) throw InvalidArgument("layer", "x-grids differ");

    CouplingData c;
    c.u_match = layer.top_velocity(layer_state);
    c.slip_deficit.resize(c.u_match.size());
    for (std::size_t i = 0; i < c.u_match.size(); ++i) c.slip_deficit[i] = bulk.ubar[i] - c.u_match[i];
    const BLField v = layer.v_bl(layer_state);
    c.mass_flux_top = v.row(layer.grid().ngamma() - 1);
    return c;
}

CoupledSolver::CoupledSolver(BulkSolver bulk, std::optional<BoundaryLayer> layer, Splitting splitting)
    : bulk_(std::move(bulk)), layer_(std::move(layer)), splitting_(splitting) {
    if (layer_) {
        if (!(layer_->grid().base() == bulk_.grid())) throw InvalidArgument("layer", "x-grids differ");
        if (!(layer_->params() == bulk_.params())) throw InvalidArgument("layer", "regime parameters differ");
    }
}

CoupledState CoupledSolver::initial_state(BulkState bulk, LayerInit init) const {
    CoupledState s{std::move(bulk), std::nullopt};
    if (layer_) s.layer = layer_->initial_state(init, s.bulk.ubar, s.bulk.time);
    return s;
}

CoupledState CoupledSolver::step(const CoupledState& state, double dt, CouplingData* coupling_out) const {
    const int nx = bulk_.grid().nx();
    if (!layer_) {
        const CouplingData zero = CouplingData::zero(nx);
        if (coupling_out) *coupling_out = zero;
        return {bulk_.step(state.bulk, zero, dt), std::nullopt};
    }
    if (!state.layer) throw InvalidArgument("layer", "coupled state has no layer field");

    if (std::abs(state.bulk.time - state.layer->time) > 0.5 * dt) {
        throw Error("coupling: bulk and layer states are at different times");
    }
    const BLForcing f0 = make_forcing(bulk_, state.bulk);

    BLState layer_mid;
    if (splitting_ == Splitting::strang) {
        layer_mid = layer_->step(*state.layer, f0, 0.5 * dt);
    } else {
        layer_mid = layer_->step(*state.layer, f0, dt);
    }

    // The layer already sits ahead of the bulk here; the exchange is taken from
    // its updated profile by construction of the splitting.
    CouplingData c1 = assemble_coupling(state.bulk, layer_mid, *layer_, 1.5 * dt);
    BulkState bulk_next = bulk_.step(state.bulk, c1, dt);

    BLState layer_next;
    if (splitting_ == Splitting::strang) {
        const CouplingData c2 = assemble_coupling(bulk_next, layer_mid, *layer_, 1.5 * dt);
        layer_next = layer_->step(layer_mid, make_forcing(bulk_, bulk_next), 0.5 * dt);
    } else {
        layer_next = std::move(layer_mid);
    }
    layer_next.time = bulk_next.time;

    if (coupling_out) {
        const double eps = bulk_.params().epsilon();
        const double dx = bulk_.grid().dx();
        const double d_mass = eps * (sum(bulk_next.eta) - sum(state.bulk.eta)) * dx / dt;
        c1.mass_balance_residual = d_mass - sum(c1.mass_flux_top) * dx;
        *coupling_out = c1;
    }
    return {std::move(bulk_next), std::move(layer_next)};
}

double CoupledSolver::stable_dt(const CoupledState& state) const {
    double dt = bulk_.stable_dt(state.bulk);
    if (layer_ && state.layer) dt = std::min(dt, layer_->stable_dt(*state.layer));
    return dt;
}

}  // namespace viscsgn

namespace viscsgn {

SolitaryWave classical_solitary(double amplitude, double mu) {
    if (!(amplitude > 0.0)) throw InvalidArgument("amplitude", "must be positive");
    if (!(mu > 0.0)) throw InvalidArgument("mu", "solitary wave needs mu > 0");
    return {amplitude, std::sqrt(3.0 * amplitude) / (2.0 * mu * std::sqrt(1.0 + amplitude)),
            std::sqrt(1.0 + amplitude)};
}

BulkState solitary_state(const Grid1D& grid, const RegimeParams& params, double amplitude, double center) {
    const SolitaryWave w = classical_solitary(amplitude, params.mu());
    const double eps = params.epsilon();
    BulkState s{Field(grid.nx()), Field(grid.nx()), 0.0};
    for (int i = 0; i < grid.nx(); ++i) {
        double d = grid.x(i) - center;
        if (grid.periodic()) d -= grid.length() * std::round(d / grid.length());
        const double e = amplitude / std::pow(std::cosh(w.kappa * d), 2);
        s.eta[i] = e / eps;
        s.ubar[i] = w.speed * e / (1.0 + e);
    }
    return s;
}

CoupledState balanced_solitary(const CoupledSolver& solver, double amplitude, double center, double tolerance,
                               int max_iterations) {
    const BulkSolver& bulk = solver.bulk();
    const Grid1D& grid = bulk.grid();
    const RegimeParams& p = bulk.params();
    const int nx = grid.nx();
    const double eps = p.epsilon();
    const double c = classical_solitary(amplitude, p.mu()).speed;

    // Flux carried by the plug layer per unit ubar.
    double layer_depth = 0.0;
    if (solver.layer()) {
        const GridBL& gb = solver.layer()->grid();
        Field plug(gb.ngamma(), 1.0);
        plug[0] = 0.0;
        layer_depth = p.mu2() * integrate_gamma(plug, gb, gb.gamma_inf());
    }
    const double h_layer = p.mu2() * p.gamma_inf();

    BulkState state = solitary_state(grid, p, amplitude, center);
    int pin = 0;
    for (int i = 1; i < nx; ++i) {
        if (state.eta[i] > state.eta[pin]) pin = i;
    }
    const int left = (pin + nx - 1) % nx;
    const int right = (pin + 1) % nx;
    const int far = (pin + nx / 2) % nx;

    auto set_velocity = [&](BulkState& s) {
        for (int i = 0; i < nx; ++i) {
            const double hb = 1.0 + eps * s.eta[i] - h_layer;
            s.ubar[i] = c * eps * s.eta[i] / (hb + layer_depth);
        }
    };
    const CouplingData zero = CouplingData::zero(nx);
    // nx momentum rows (the peak row replaced by symmetry) plus a far-field
    // row fixing the background level, solved in the least-squares sense.
    auto residual = [&](const BulkState& s) {
        Field w = bulk.d1(s.ubar);
        for (double& v : w) v *= -c;
        Field r = bulk.dispersive_operator(s, w);
        const Field rhs = bulk.momentum_rhs(s, zero);
        for (int i = 0; i < nx; ++i) r[i] -= rhs[i];
        r[pin] = s.eta[right] - s.eta[left];
        r.push_back(s.eta[far]);
        return r;
    };

    set_velocity(state);
    Eigen::MatrixXd jac(nx + 1, nx);
    Field r = residual(state);
    for (int it = 0;; ++it) {
        if (max_abs(r) < tolerance) break;
        if (it == max_iterations) throw SolverError("balanced solitary wave: Newton did not converge");
        for (int j = 0; j < nx; ++j) {
            BulkState s = state;
            const double h = 1e-7;
            s.eta[j] += h;
            set_velocity(s);
            const Field rj = residual(s);
            for (int i = 0; i <= nx; ++i) jac(i, j) = (rj[i] - r[i]) / h;
        }
        const Eigen::VectorXd step =
            jac.colPivHouseholderQr().solve(Eigen::Map<const Eigen::VectorXd>(r.data(), nx + 1));
        // Backtracking on the residual norm.
        const double norm0 = dot(r, r);
        double lambda = 1.0;
        for (int k = 0;; ++k) {
            BulkState trial = state;
            for (int i = 0; i < nx; ++i) trial.eta[i] -= lambda * step[i];
            set_velocity(trial);
            Field rt = residual(trial);
            if (dot(rt, rt) < norm0 || k == 20) {
                state = std::move(trial);
                r = std::move(rt);
                break;
            }
            lambda *= 0.5;
        }
    }

    const double peak = eps * max_abs(state.eta);
    if (std::abs(peak - amplitude) > 0.5 * amplitude) {
        throw SolverError("balanced solitary wave: Newton converged to a different branch (peak " +
                          std::to_string(peak) + ")");
    }
    return solver.initial_state(std::move(state), LayerInit::plug);
}

double peak_value(std::span<const double> f) {
    const std::size_t n = f.size();
    if (n < 3) throw InvalidArgument("field", "needs at least three values");
    const std::size_t k = static_cast<std::size_t>(std::max_element(f.begin(), f.end()) - f.begin());
    const double fm = f[(k + n - 1) % n], f0 = f[k], fp = f[(k + 1) % n];
    const double curv = fm - 2.0 * f0 + fp;
    if (curv >= 0.0) return f0;
    return f0 - 0.125 * (fp - fm) * (fp - fm) / curv;
}

}  // namespace viscsgn
