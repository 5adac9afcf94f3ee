#pragma once

#include <optional>

#include "viscsgn/blayer.hpp"
#include "viscsgn/bulk.hpp"
#include "viscsgn/coupling_data.hpp"

namespace viscsgn {

enum class Splitting {
    sequential,  ///< full layer step, then full bulk step
    strang,      ///< half layer, full bulk, half layer
};

/// Matching velocity, slip deficit and vertical mass flux at gamma_inf.
/// Throws if the two states are more than time_tolerance apart.
CouplingData assemble_coupling(const BulkState& bulk, const BLState& layer_state, const BoundaryLayer& layer,
                               double time_tolerance);

/// Bulk and layer advanced together.
struct CoupledState {
    BulkState bulk;
    std::optional<BLState> layer;
};

/**
 * @brief Operator-split stepper for the bulk / boundary-layer system.
 *
 * Without a layer it reduces exactly to BulkSolver::step with zero coupling.
 */
class CoupledSolver {
public:
    CoupledSolver(BulkSolver bulk, std::optional<BoundaryLayer> layer, Splitting splitting = Splitting::sequential);

    const BulkSolver& bulk() const { return bulk_; }
    const std::optional<BoundaryLayer>& layer() const { return layer_; }
    Splitting splitting() const { return splitting_; }

    CoupledState initial_state(BulkState bulk, LayerInit init) const;

    /// Advances both states by dt. If coupling_out is given it receives the
    /// data used by the bulk step, with mass_balance_residual set to
    /// eps d/dt int eta dx - int q dx over the step.
    CoupledState step(const CoupledState& state, double dt, CouplingData* coupling_out = nullptr) const;

    double stable_dt(const CoupledState& state) const;

private:
    BulkSolver bulk_;
    std::optional<BoundaryLayer> layer_;
    Splitting splitting_;
};

/// Classical solitary wave on unit depth, eps*eta = a sech^2(kappa (x - x_c)),
/// kappa = sqrt(3a) / (2 mu sqrt(1 + a)), speed c = sqrt(1 + a).
struct SolitaryWave {
    double amplitude;
    double kappa;
    double speed;
};

SolitaryWave classical_solitary(double amplitude, double mu);

/// Samples the classical wave and its depth-averaged velocity
/// ubar = c eps*eta / (1 + eps*eta) on the grid.
BulkState solitary_state(const Grid1D& grid, const RegimeParams& params, double amplitude, double center);

/**
 * @brief Discrete traveling wave of the coupled model.
 *
 * Solves for eta with speed c = sqrt(1 + a) fixed, the layer in plug state
 * (u^BL = ubar above the wall) and ubar tied to eta by the steady mass
 * balance. Newton with a dense Jacobian; the peak node is pinned by a
 * symmetry row. Without a layer this is the discrete SGN solitary wave.
 * The returned layer profile is the plug profile.
 */
CoupledState balanced_solitary(const CoupledSolver& solver, double amplitude, double center,
                               double tolerance = 1e-11, int max_iterations = 30);

/// Peak of a field from a parabola through the largest node and its neighbours.
double peak_value(std::span<const double> f);

}  // namespace viscsgn
