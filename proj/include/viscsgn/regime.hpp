#pragma once

#include <optional>
#include <string>
#include <vector>

namespace viscsgn {

/// Dimensional description of a flow. All lengths in metres.
struct PhysicalScales {
    double gravity = 9.81;
    double depth = 1.0;
    double amplitude = 0.1;
    double wavelength = 10.0;
    /// Kinematic viscosity; when present the Reynolds prefactor is derived from it.
    std::optional<double> viscosity;

    bool operator==(const PhysicalScales&) const = default;
};

/**
 * @brief Dimensionless numbers of the viscous shallow-water regime.
 *
 * epsilon = A/d (nonlinearity), mu = d/l (shallowness) and the Reynolds
 * number slaved to the shallowness through Re = R * mu^-5. The boundary
 * layer occupies y in [-1, -1 + mu^2 * gamma_inf].
 *
 * gamma_inf == 0 denotes a configuration without boundary layer (the
 * inviscid SGN limit); mu == 0 is accepted only in that case and gives the
 * non-dispersive shallow-water limit.
 */
class RegimeParams {
public:
    static constexpr double kDefaultGammaInf = 10.0;

    RegimeParams() = default;
    RegimeParams(double epsilon, double mu, double R, double gamma_inf = kDefaultGammaInf);

    double epsilon() const { return epsilon_; }
    double mu() const { return mu_; }
    double mu2() const { return mu_ * mu_; }
    double R() const { return R_; }
    double gamma_inf() const { return gamma_inf_; }
    bool has_layer() const { return gamma_inf_ > 0.0; }

    /// Re = R mu^-5, recomputed on every call.
    double reynolds() const;

    /// Copy with a different shallowness; R and gamma_inf are kept, so Re follows mu.
    RegimeParams with_mu(double mu) const { return {epsilon_, mu, R_, gamma_inf_}; }
    RegimeParams without_layer() const { return {epsilon_, mu_, R_, 0.0}; }

    bool operator==(const RegimeParams&) const = default;

private:
    double epsilon_ = 0.1;
    double mu_ = 0.1;
    double R_ = 1.0;
    double gamma_inf_ = kDefaultGammaInf;
};

/// Result of nondimensionalising physical scales.
struct Nondimensionalized {
    RegimeParams params;
    /// c0 d / nu when a viscosity was supplied.
    std::optional<double> physical_reynolds;
    /// |R_requested - Re_phys mu^5|, how far the fluid sits from Re = R mu^-5.
    std::optional<double> regime_deviation;
    std::vector<std::string> warnings;
};

/// epsilon = A/d, mu = d/l, Re = R mu^-5. With a viscosity the returned R is
/// Re_phys * mu^5 and the deviation from the requested R is reported.
Nondimensionalized nondimensionalize(const PhysicalScales& scales, double R,
                                     double gamma_inf = RegimeParams::kDefaultGammaInf);

/// c0 = sqrt(g d).
double characteristic_velocity(const PhysicalScales& scales);

/// y-extent of the resolved boundary layer, mu^2 * gamma_inf.
/// With Re = mu^-5 one has (mu Re)^(-1/2) = mu^2, so gamma is measured in
/// units of the classical viscous length.
double bl_thickness(const RegimeParams& params);

}  // namespace viscsgn
