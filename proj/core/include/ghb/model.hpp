#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ghb {

/// Stress components retained in the state vector. sigma33 relaxes to zero
/// independently of the other components, so it is eliminated up front and
/// N2 = sigma22.
struct StressState {
    double s11 = 0.0;
    double s22 = 0.0;
    double s12 = 0.0;
};

/// Single-mode Giesekus material constants. The solvent contribution is not
/// modeled; eta_s must be exactly zero.
class ModelParams {
public:
    ModelParams(double modulus, double relaxation_time, double anisotropy,
                double solvent_viscosity = 0.0)
        : modulus_(modulus),
          relaxation_time_(relaxation_time),
          anisotropy_(anisotropy) {
        if (!(modulus > 0.0))
            throw std::invalid_argument("ModelParams: modulus G must be > 0");
        if (!(relaxation_time > 0.0))
            throw std::invalid_argument("ModelParams: relaxation time lambda must be > 0");
        if (!(anisotropy >= 0.0 && anisotropy < 1.0))
            throw std::invalid_argument("ModelParams: anisotropy alpha must satisfy 0 <= alpha < 1");
        if (solvent_viscosity != 0.0)
            throw std::invalid_argument("ModelParams: solvent viscosity must be zero");
    }

    double modulus() const { return modulus_; }
    double relaxation_time() const { return relaxation_time_; }
    double anisotropy() const { return anisotropy_; }
    double solvent_viscosity() const { return 0.0; }

    bool operator==(const ModelParams&) const = default;

private:
    double modulus_;
    double relaxation_time_;
    double anisotropy_;
};

/// Imposed oscillation gamma(t) = gamma0 sin(omega t).
class Loading {
public:
    Loading(double strain_amplitude, double angular_frequency)
        : strain_amplitude_(strain_amplitude),
          angular_frequency_(angular_frequency) {
        if (!(strain_amplitude > 0.0))
            throw std::invalid_argument("Loading: strain amplitude gamma0 must be > 0");
        if (!(angular_frequency > 0.0))
            throw std::invalid_argument("Loading: angular frequency omega must be > 0");
    }

    double strain_amplitude() const { return strain_amplitude_; }
    double angular_frequency() const { return angular_frequency_; }
    double period() const { return 2.0 * std::numbers::pi / angular_frequency_; }

    bool operator==(const Loading&) const = default;

private:
    double strain_amplitude_;
    double angular_frequency_;
};

struct DerivedGroups {
    double deborah;      // De = lambda * omega
    double weissenberg;  // Wi = lambda * gamma0 * omega
};

inline DerivedGroups derived_groups(const ModelParams& params, const Loading& loading) {
    const double de = params.relaxation_time() * loading.angular_frequency();
    return {de, loading.strain_amplitude() * de};
}

/// gamma_dot(t) = gamma0 * omega * cos(omega t)
inline double shear_rate(const Loading& loading, double t) {
    return loading.strain_amplitude() * loading.angular_frequency() *
           std::cos(loading.angular_frequency() * t);
}

/// Time derivatives of (sigma11, sigma22, sigma12) under oscillatory shear,
/// with all non-derivative terms moved to the right-hand side.
StressState ode_rhs_dimensional(const ModelParams& params, const StressState& state,
                                double t, const Loading& loading);

/// Dimensionless form: sigma_tilde = sigma / (G * Wi), t_tilde = t / lambda,
/// forcing gamma_tilde = cos(De * t_tilde).
StressState ode_rhs_dimensionless(double anisotropy, double deborah, double weissenberg,
                                  const StressState& state, double t_tilde);

/// State-Jacobian of ode_rhs_dimensionless, row-major [d f_i / d state_j].
std::array<double, 9> ode_jacobian_dimensionless(double anisotropy, double deborah,
                                                 double weissenberg, const StressState& state,
                                                 double t_tilde);

/// Partial time derivative of ode_rhs_dimensionless at fixed state.
StressState ode_time_derivative_dimensionless(double anisotropy, double deborah,
                                              double weissenberg, const StressState& state,
                                              double t_tilde);

}  // namespace ghb
