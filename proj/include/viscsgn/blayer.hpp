#pragma once

#include <span>

#include "viscsgn/bulk.hpp"
#include "viscsgn/grids.hpp"
#include "viscsgn/regime.hpp"

namespace viscsgn {

/// How the layer velocity is tied to the bulk at gamma_inf.
enum class Matching { dirichlet, neumann };

/// Initial layer profile: linear gamma/gamma_inf * ubar, zero, or plug
/// (ubar everywhere above the wall, an impulsively started outer flow).
enum class LayerInit { linear, zero, plug };

/// Bulk-imposed forcing of the layer equation, one value per x-node.
struct BLForcing {
    Field eta_x;         ///< eps * eta_x
    Field grad_bracket;  ///< x-derivative of the mu^2 pressure bracket
    Field ubar_top;      ///< matching velocity at gamma_inf

    static BLForcing zero(int nx) {
        const auto n = static_cast<std::size_t>(nx);
        return {Field(n, 0.0), Field(n, 0.0), Field(n, 0.0)};
    }
};

struct BLOptions {
    Matching matching = Matching::dirichlet;
    double cfl = 0.5;
};

/**
 * @brief Prandtl-type equation for the bottom boundary layer.
 *
 *   u_t = -u u_x + u_g int_0^g u_x dg' + u_gg / R - eps eta_x - mu^2 B_x,
 *
 * with v = -mu^2 int_0^g u_x dg', no-slip at g = 0 and matching at g_inf.
 * Advection and forcing are explicit (SSP-RK2), diffusion is Crank-Nicolson
 * with one tridiagonal solve per column and stage.
 */
class BoundaryLayer {
public:
    BoundaryLayer(GridBL grid, RegimeParams params, BLOptions options = {});

    const GridBL& grid() const { return grid_; }
    const RegimeParams& params() const { return params_; }
    const BLOptions& options() const { return options_; }

    BLState initial_state(LayerInit init, std::span<const double> ubar, double time = 0.0) const;

    /// v(x, g) = -mu^2 int_0^g u_x dg' (trapezoidal, centered u_x).
    BLField v_bl(const BLState& state) const;

    /// Full right-hand side u_t (wall row zero).
    BLField prandtl_rhs(const BLState& state, const BLForcing& forcing) const;

    BLState step(const BLState& state, const BLForcing& forcing, double dt) const;

    /// u_g(x, 0) / R with a one-sided second-order difference.
    Field wall_shear(const BLState& state) const;

    /// u at gamma_inf.
    Field top_velocity(const BLState& state) const;

    /// int_0^g_inf u dg per column.
    Field column_integral(const BLState& state) const;

    /// Advective limit in x and gamma.
    double stable_dt(const BLState& state) const;

    /// mu^2 * sum over the grid of int 0.5 u^2 dg dx.
    double kinetic_energy(const BLState& state) const;
    /// mu^2 * sum of int u_g^2 / R dg dx (instantaneous dissipation rate).
    double dissipation(const BLState& state) const;

private:
    BLField explicit_part(const BLState& state, const BLForcing& forcing) const;
    Field x_derivative_centered(const BLField& u, int j) const;
    void implicit_diffusion(std::span<double> column, std::span<const double> explicit_rhs, double top_value,
                            double dt) const;

    GridBL grid_;
    RegimeParams params_;
    BLOptions options_;
};

/// Layer pressure p = eps eta + mu^2 [H D v_surf + H^2/2 A], gamma-independent
/// to the retained order.
Field p_bl(const BulkSolver& bulk, const BulkState& state, std::span<const double> v_surf, const Tendency& tend);

/// Forcing for the layer from the current bulk state. The mu^2 bracket is
/// taken from the closure with q = 0; the q terms are O(mu^4).
BLForcing make_forcing(const BulkSolver& bulk, const BulkState& state);

}  // namespace viscsgn
