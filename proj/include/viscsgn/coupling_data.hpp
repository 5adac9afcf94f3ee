#pragma once

#include "viscsgn/grids.hpp"

namespace viscsgn {

/// Exchange quantities between the Euler region and the boundary layer,
/// one value per x-node.
struct CouplingData {
    Field u_match;        ///< layer velocity seen by the bulk at gamma_inf
    Field slip_deficit;   ///< ubar - u_match
    Field mass_flux_top;  ///< layer vertical velocity at gamma_inf
    double mass_balance_residual = 0.0;

    static CouplingData zero(int nx) {
        const auto n = static_cast<std::size_t>(nx);
        return {Field(n, 0.0), Field(n, 0.0), Field(n, 0.0), 0.0};
    }
};

}  // namespace viscsgn
