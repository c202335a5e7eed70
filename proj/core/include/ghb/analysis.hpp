#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ghb/hb.hpp"
#include "ghb/ivp.hpp"
#include "ghb/model.hpp"
#include "ghb/spectral.hpp"

namespace ghb {

/// Sum the truncated Fourier series of a solution on the uniform one-period
/// grid. Requires sample_count >= 2*(2H-1) + 1 so the highest harmonic is
/// resolved.
Waveform evaluate_waveform(const SpectralSolution& solution, int sample_count);

/// Same evaluation for dense nonnegative-harmonic coefficient sets over a
/// period of given length (units follow the coefficients).
Waveform evaluate_waveform(const CoefficientSets& coeffs, double period, int sample_count,
                           bool dimensionless);

struct ChannelSamples {
    std::vector<double> s11, s22, s12;
};

/// Time derivatives of the reconstructed series on the same grid: each
/// coefficient Y_n maps to (i n w) Y_n before summation, w = 2*pi/period.
ChannelSamples evaluate_derivative(const CoefficientSets& coeffs, double period,
                                   int sample_count);

struct ResidualReport {
    double epsilon_r = 0.0;
    double rms_s11 = 0.0;
    double rms_s22 = 0.0;
    double rms_s12 = 0.0;
    int sample_count = 0;
    std::string source;
};

/// Dimensionless ODE residual metric: coefficients (in Pa) are rescaled by
/// 1/(G*Wi), the series and its symbolic derivative are evaluated on the
/// N_t-point grid, inserted into the dimensionless equations, and the
/// stacked residual norm is reported as eps_r = ||r||_2 / (3 N_t).
ResidualReport residual_error(const CoefficientSets& dimensional, const ModelParams& params,
                              const Loading& loading, int sample_count = 1000,
                              std::string_view source = "");

/// Sine/cosine moduli from complex coefficients (in Pa), including the
/// 1/gamma0 (shear) and 1/gamma0^2 (normal) normalizations.
HarmonicSpectrum moduli_from_coefficients(const CoefficientSets& dimensional,
                                          const Loading& loading);
HarmonicSpectrum moduli_from_coefficients(const SpectralSolution& solution);

/// Inverse of moduli_from_coefficients (mutual inverses up to roundoff).
CoefficientSets coefficients_from_moduli(const HarmonicSpectrum& spectrum,
                                         const Loading& loading);

struct HarmonicIntensities {
    std::vector<double> shear;  // I_n = hypot(G'_n, G''_n), odd n
    std::vector<double> n1;     // J_n from F coefficients, even n
    std::vector<double> n2;     // K_n from S coefficients, even n
    std::vector<double> shear_ratio;  // I_n / I_1
    std::vector<double> n1_ratio;     // J_n / J_0
    std::vector<double> n2_ratio;     // K_n / K_0  (NaN when the leading harmonic vanishes)
};

HarmonicIntensities harmonic_intensities(const HarmonicSpectrum& spectrum);

struct LissajousCurve {
    std::vector<double> input;   // sin(wt) for elastic, cos(wt) for viscous
    std::vector<double> stress;  // channel / max |channel|
};

struct LissajousData {
    LissajousCurve elastic_s12, viscous_s12;
    LissajousCurve elastic_n1, viscous_n1;
    LissajousCurve elastic_n2, viscous_n2;
    double max_s12 = 0.0, max_n1 = 0.0, max_n2 = 0.0;
};

/// Normalized elastic/viscous Lissajous curves for sigma12, N1, N2 over one
/// period. A channel that is identically zero cannot be normalized.
LissajousData lissajous_data(const Waveform& waveform);

struct ConvergenceStudy {
    std::vector<int> truncations;
    std::vector<double> xi_shear, xi_n1, xi_n2;  // Pa
    int reference_truncation = 0;
    double scale_shear = 0.0, scale_n1 = 0.0, scale_n2 = 0.0;  // max |reference channel|
};

/// Max pointwise deviation per channel from the high-truncation reference,
/// over one period on a 1000-point grid.
ConvergenceStudy convergence_errors(const std::vector<SpectralSolution>& solutions,
                                    const SpectralSolution& reference);

struct DecayFit {
    double decay = 0.0;      // m in xi ~ u * exp(-m * abscissa)
    double prefactor = 0.0;  // u
    double r_squared = 0.0;
    int points_used = 0;
};

/// Least-squares line fit of ln(xi) against the abscissa, excluding points
/// at or below the floor. Requires at least 3 usable points.
DecayFit fit_decay(const std::vector<double>& abscissa, const std::vector<double>& xi,
                   double floor_value);

struct ConvergenceFits {
    DecayFit shear, n1, n2;
};

/// Per-channel decay fits with abscissas (2H-1) for shear and (2H-2) for the
/// normal differences, floored at 10 * tolerance * channel scale.
ConvergenceFits fit_decay(const ConvergenceStudy& study, double solver_tolerance = 1e-12);

struct ComparisonRecord {
    ResidualReport hb_residual, ni_residual;
    double hb_seconds = 0.0;  // median of 3 runs
    double ni_seconds = 0.0;
    double speedup = 0.0;     // ni_seconds / hb_seconds
    double max_moduli_rel_diff = 0.0;
    int ni_cycles = 0;
};

/// Runs both solution paths at one operating point and reports accuracy and
/// cost side by side. Moduli agreement is measured per channel relative to
/// that channel's leading-harmonic intensity, over shear n <= 3 and normal
/// n <= 2. The two paths run sequentially to keep the timings clean.
ComparisonRecord compare_hb_ni(const ModelParams& params, const Loading& loading,
                               int truncation, const SolverOptions& solver_options = {},
                               const IntegratorOptions& integrator_options = {});

}  // namespace ghb
