#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "viscsgn/regime.hpp"
#include "viscsgn/verify/jet.hpp"

namespace viscsgn::verify {

using Field3 = std::function<Jet(const Jet& x, const Jet& y, const Jet& t)>;
using Field2 = std::function<Jet(const Jet& x, const Jet& t)>;

/**
 * @brief Analytic velocity, pressure and surface fields for residual audits.
 *
 * Fields are written in jet arithmetic, so their first and second
 * derivatives are exact. v and p may be left empty for model audits, which
 * derive them from u and eta. layer_u, when set, is the boundary-layer
 * velocity u(x, gamma, t) with gamma carried in the y slot.
 */
struct ManufacturedField {
    std::string name;
    Field3 u;
    Field3 v;
    Field3 p;
    Field2 eta;
    Field3 layer_u;
};

struct GateReport {
    bool passed = true;
    double max_error = 0.0;
    std::string worst;  ///< "<field>.<derivative>" of the largest mismatch
};

/// Compares jet derivatives with fourth-order central differences of the
/// values at a fixed set of probe points in x in [0, 2pi), y in [-1, eps].
GateReport self_consistency_gate(const ManufacturedField& field, const RegimeParams& params,
                                 double tolerance = 1e-6);

/// u = v = p = eta = 0.
ManufacturedField rest_field();

/// Stream-function field psi = (y + 1)^2 sin(x - t) cos(y), u = psi_y, v = -psi_x,
/// with p and eta generic. Incompressible and no-slip by construction.
ManufacturedField streamfunction_field();

/// Trigonometric field with coefficients drawn from a seeded generator.
ManufacturedField random_field(std::uint64_t seed);

struct AnsatzSpec {
    /// Amplitude of the zero-mean correction g(x, t) phi(s).
    double correction = 1.0;
    /// Constant added to the layer profile; nonzero breaks no-slip.
    double wall_slip = 0.0;
};

/**
 * @brief Fields obeying u = ubar + mu^2 g(x, t) phi(s), phi = s^2 - 1/3.
 *
 * s = (y - y_b)/H maps the Euler column [y_b, eps eta] onto [0, 1], so phi
 * has zero column mean and ubar is the exact depth average. The layer
 * velocity is ubar(x, t) (tanh(gamma) + wall_slip).
 */
ManufacturedField ansatz_flow(const RegimeParams& params, const AnsatzSpec& spec = {});

}  // namespace viscsgn::verify
