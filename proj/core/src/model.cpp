#include "ghb/model.hpp"

namespace ghb {

StressState ode_rhs_dimensional(const ModelParams& params, const StressState& state,
                                double t, const Loading& loading) {
    const double lambda = params.relaxation_time();
    const double quad = params.anisotropy() / (lambda * params.modulus());
    const double rate = shear_rate(loading, t);
    const double s11 = state.s11, s22 = state.s22, s12 = state.s12;

    StressState d;
    d.s11 = -s11 / lambda - quad * (s11 * s11 + s12 * s12) + 2.0 * rate * s12;
    d.s22 = -s22 / lambda - quad * (s22 * s22 + s12 * s12);
    d.s12 = -s12 / lambda - quad * (s11 + s22) * s12 + rate * (s22 + params.modulus());
    return d;
}

StressState ode_rhs_dimensionless(double anisotropy, double deborah, double weissenberg,
                                  const StressState& state, double t_tilde) {
    const double aw = anisotropy * weissenberg;
    const double g = std::cos(deborah * t_tilde);
    const double s11 = state.s11, s22 = state.s22, s12 = state.s12;

    StressState d;
    d.s11 = -s11 - aw * (s11 * s11 + s12 * s12) + 2.0 * g * weissenberg * s12;
    d.s22 = -s22 - aw * (s22 * s22 + s12 * s12);
    d.s12 = -s12 - aw * (s11 + s22) * s12 + g * (1.0 + weissenberg * s22);
    return d;
}

std::array<double, 9> ode_jacobian_dimensionless(double anisotropy, double deborah,
                                                 double weissenberg, const StressState& state,
                                                 double t_tilde) {
    const double aw = anisotropy * weissenberg;
    const double g = std::cos(deborah * t_tilde);
    const double s11 = state.s11, s22 = state.s22, s12 = state.s12;

    return {
        -1.0 - 2.0 * aw * s11, 0.0,                    -2.0 * aw * s12 + 2.0 * g * weissenberg,
        0.0,                   -1.0 - 2.0 * aw * s22,  -2.0 * aw * s12,
        -aw * s12,             -aw * s12 + g * weissenberg, -1.0 - aw * (s11 + s22),
    };
}

StressState ode_time_derivative_dimensionless(double anisotropy, double deborah,
                                              double weissenberg, const StressState& state,
                                              double t_tilde) {
    (void)anisotropy;
    const double dg = -deborah * std::sin(deborah * t_tilde);
    return {2.0 * dg * weissenberg * state.s12, 0.0, dg * (1.0 + weissenberg * state.s22)};
}

}  // namespace ghb
