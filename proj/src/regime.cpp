#include "viscsgn/regime.hpp"

#include <cmath>

#include "viscsgn/error.hpp"

namespace viscsgn {

namespace {

void require_positive(double value, const char* field) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw InvalidArgument(field, "must be strictly positive and finite (got " +
                                         std::to_string(value) + ")");
    }
}

}  // namespace

RegimeParams::RegimeParams(double epsilon, double mu, double R, double gamma_inf)
    : epsilon_(epsilon), mu_(mu), R_(R), gamma_inf_(gamma_inf) {
    require_positive(epsilon, "epsilon");
    require_positive(R, "R");
    if (!(mu >= 0.0) || !(mu < 1.0)) {
        throw InvalidArgument("mu", "must lie in [0, 1) (got " + std::to_string(mu) + ")");
    }
    if (!(gamma_inf >= 0.0) || !std::isfinite(gamma_inf)) {
        throw InvalidArgument("gamma_inf", "must be non-negative");
    }
    if (mu == 0.0 && gamma_inf > 0.0) {
        throw InvalidArgument("mu", "mu = 0 is only admissible without boundary layer");
    }
    if (mu * mu * gamma_inf >= 1.0) {
        throw InvalidArgument("gamma_inf", "boundary layer mu^2*gamma_inf = " +
                                               std::to_string(mu * mu * gamma_inf) +
                                               " does not fit in the water column");
    }
}

double RegimeParams::reynolds() const {
    if (mu_ == 0.0) return INFINITY;
    return R_ / std::pow(mu_, 5);
}

double characteristic_velocity(const PhysicalScales& scales) {
    require_positive(scales.gravity, "gravity");
    require_positive(scales.depth, "depth");
    return std::sqrt(scales.gravity * scales.depth);
}

Nondimensionalized nondimensionalize(const PhysicalScales& scales, double R, double gamma_inf) {
    require_positive(scales.gravity, "gravity");
    require_positive(scales.depth, "depth");
    require_positive(scales.amplitude, "amplitude");
    require_positive(scales.wavelength, "wavelength");
    require_positive(R, "R");
    if (scales.viscosity) require_positive(*scales.viscosity, "viscosity");

    Nondimensionalized out;
    const double epsilon = scales.amplitude / scales.depth;
    const double mu = scales.depth / scales.wavelength;
    if (scales.amplitude > scales.depth) {
        out.warnings.push_back("amplitude exceeds the still-water depth (epsilon = " +
                               std::to_string(epsilon) + ")");
    }
    double r_used = R;
    if (scales.viscosity) {
        const double re = characteristic_velocity(scales) * scales.depth / *scales.viscosity;
        out.physical_reynolds = re;
        r_used = re * std::pow(mu, 5);
        out.regime_deviation = std::abs(R - r_used);
        require_positive(r_used, "R");
    }
    if (mu <= 0.0) throw InvalidArgument("mu", "must be positive");
    out.params = RegimeParams(epsilon, mu, r_used, gamma_inf);
    return out;
}

double bl_thickness(const RegimeParams& params) { return params.mu2() * params.gamma_inf(); }

}  // namespace viscsgn
