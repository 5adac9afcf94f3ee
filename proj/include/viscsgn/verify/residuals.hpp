#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "viscsgn/regime.hpp"
#include "viscsgn/verify/fields.hpp"

namespace viscsgn::verify {

/**
 * Audited relations.
 *
 *  eq8          Navier-Stokes minus the Euler system kept in the Euler region
 *  eq10         ansatz pressure (ubar only) against direct y-integration
 *  eq10_typeset pressure with the parenthesis exactly as typeset
 *  eq11         x-momentum with v and p written through u and eta
 *  eq14         depth-integrated momentum, exact form
 *  eq15         reduced depth-integrated momentum (both bracket variants)
 *  eq14_vs_15   difference between the two depth-integrated forms
 *  eq20         layer pressure against the bulk pressure at the layer top
 *  eq21         layer momentum against the Prandtl form, plus no-slip
 */
enum class Equation { eq8, eq10, eq10_typeset, eq11, eq14, eq15, eq14_vs_15, eq20, eq21 };

/// Throws InvalidArgument("equation", ...) for an unknown tag.
Equation parse_equation(std::string_view tag);
std::string equation_tag(Equation eq);

/// Order in mu of the stated remainder; 0 marks an identity.
int claimed_order(Equation eq);

struct Probes {
    int nx = 8;            ///< x-probes on [0, 2pi)
    int ny = 5;            ///< interior y (or gamma) probes per column
    double time = 0.3;
    int quadrature = 10;   ///< Gauss-Legendre nodes per integral
    double fd_step = 1e-2; ///< step of the eighth-order differences
};

/// Max-norms of the six relations of the dimensionless Navier-Stokes system.
struct NSResidual {
    double momentum_x = 0.0;
    double momentum_y = 0.0;
    double continuity = 0.0;
    double dynamic = 0.0;
    double kinematic = 0.0;
    double no_slip = 0.0;

    std::array<double, 6> values() const {
        return {momentum_x, momentum_y, continuity, dynamic, kinematic, no_slip};
    }
};

/// Requires u, v, p and eta. Throws InvalidArgument if the gate fails.
NSResidual ns_residual(const ManufacturedField& field, const RegimeParams& params, const Probes& probes = {});

struct ModelResidual {
    Equation equation = Equation::eq15;
    double value = 0.0;
    /// eq15 and eq14_vs_15: the same residual with ubar ubar_x in place of ubar_x^2.
    std::optional<double> literal_variant;
};

/**
 * @brief Brute-force imbalance of one relation on the given fields.
 *
 * Only u and eta (and layer_u for eq21) are read. v follows from
 * incompressibility and the kinematic condition, p from direct
 * y-integration of the vertical momentum, ubar from the column average.
 * Every integral uses Gauss-Legendre quadrature on the moving column;
 * outer x and t derivatives of integrated quantities use eighth-order
 * differences. Nothing here shares code with the solver.
 */
ModelResidual model_residual(Equation eq, const ManufacturedField& field, const RegimeParams& params,
                             const Probes& probes = {});

}  // namespace viscsgn::verify
