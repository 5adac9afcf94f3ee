#pragma once

#include <span>

#include "viscsgn/coupling_data.hpp"
#include "viscsgn/grids.hpp"
#include "viscsgn/regime.hpp"

namespace viscsgn {

/// Form of the last term of the mu^2 bracket, (ubar_xt + ubar ubar_xx - X).
/// ux_squared (X = ubar_x^2) is the model; ubar_ux (X = ubar ubar_x) is the
/// literal momentum-equation variant, kept for audits and mutation fixtures.
enum class BracketVariant { ux_squared, ubar_ux };

enum class TimeScheme { rk2, rk4 };

struct BulkOptions {
    int stencil_order = 2;  ///< 2 or 4
    double cfl = 0.5;
    BracketVariant variant = BracketVariant::ux_squared;
    TimeScheme time_scheme = TimeScheme::rk2;
};

/// Closure quantities of the Euler region on the x-grid.
struct BulkClosure {
    Field v_surf;        ///< vertical velocity at the free surface
    Field p_bracket;     ///< mu^2 bracket of the pressure evaluated at the layer top
    Field slip_term;     ///< (ubar - u_match)(H_t + (H ubar)_x)
};

/// Time derivatives of (eta, ubar) for a state and coupling.
struct Tendency {
    Field eta_t;
    Field ubar_t;
};

/**
 * @brief Depth-averaged fully nonlinear dispersive solver for the Euler region.
 *
 * Unknowns are the surface elevation eta and the depth-averaged velocity
 * ubar over the depth H = 1 + eps*eta - mu^2*gamma_inf. Mass:
 *
 *   eps eta_t + (H ubar)_x = q,
 *
 * where q is the vertical velocity delivered by the boundary layer.
 * Momentum, after substituting the kinematic closure for the surface
 * vertical velocity:
 *
 *   L[ubar_t] = -H ubar ubar_x - H H_x - (ubar - u_match) q
 *               + mu^2 ( H^3/3 (ubar ubar_xx - ubar_x^2) )_x,
 *   L[w] = H w - mu^2 ( H^3/3 w_x )_x.
 *
 * L is symmetric positive definite for H > 0 and is inverted each stage.
 */
class BulkSolver {
public:
    BulkSolver(Grid1D grid, RegimeParams params, BulkOptions options = {});

    const Grid1D& grid() const { return grid_; }
    const RegimeParams& params() const { return params_; }
    const BulkOptions& options() const { return options_; }

    Field depth(const BulkState& state) const;

    /// First and second x-derivatives with the configured stencil order.
    Field d1(std::span<const double> f) const;
    Field d2(std::span<const double> f) const;

    /// v at y = eps*eta from the kinematic condition rewritten with the mass
    /// balance: -(H ubar)_x + eps ubar eta_x + q.
    Field v_surface(const BulkState& state, std::span<const double> mass_flux_top) const;

    /// v(x, y) = v_surf + (eps*eta - y) ubar_x, for y inside every column.
    Field vertical_velocity(const BulkState& state, double y, std::span<const double> v_surf) const;

    /// eps*eta_t = -(H ubar)_x + q; returns eta_t.
    Field mass_rhs(const BulkState& state, std::span<const double> mass_flux_top) const;

    /// Right side of L[ubar_t] = RHS.
    Field momentum_rhs(const BulkState& state, const CouplingData& coupling) const;

    /// L[w] = H w - mu^2 (H^3/3 w_x)_x.
    Field dispersive_operator(const BulkState& state, std::span<const double> w) const;

    /// Solves L[w] = rhs.
    Field solve_dispersive(const BulkState& state, std::span<const double> rhs) const;

    Tendency tendency(const BulkState& state, const CouplingData& coupling) const;

    /// (d_t + ubar d_x) v_surf from the discrete closure (q_t neglected).
    Field material_derivative_vsurf(const BulkState& state, std::span<const double> v_surf,
                                    const Tendency& tend) const;

    /// ubar_xt + ubar ubar_xx - ubar_x^2 (or the configured variant).
    Field acceleration_bracket(const BulkState& state, const Tendency& tend) const;

    /// p(x, y) = eps eta - mu^2 [ (y - eps eta) D v_surf - (y - eps eta)^2/2 A ]
    /// with D = d_t + ubar d_x and A the acceleration bracket. y is per node.
    Field pressure(const BulkState& state, std::span<const double> y, std::span<const double> v_surf,
                   const Tendency& tend) const;
    Field pressure(const BulkState& state, double y, std::span<const double> v_surf,
                   const Tendency& tend) const;

    BulkClosure closure(const BulkState& state, const CouplingData& coupling) const;

    /// One explicit step (SSP-RK2 by default, classical RK4 on request) with an
    /// elliptic solve per stage; the coupling is frozen over the step.
    BulkState step(const BulkState& state, const CouplingData& coupling, double dt) const;

    /// cfl * dx / max(|ubar| + sqrt(H)).
    double stable_dt(const BulkState& state) const;

private:
    Field divergence_flux(std::span<const double> a, std::span<const double> w) const;

    Grid1D grid_;
    RegimeParams params_;
    BulkOptions options_;
};

}  // namespace viscsgn
