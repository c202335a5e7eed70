#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ghb/model.hpp"
#include "ghb/spectral.hpp"

namespace ghb {

struct IntegratorOptions {
    double relative_tolerance = 1e-6;
    double absolute_tolerance = 1e-9;
    int max_cycles = 500;
    double alternance_threshold = 1e-6;
    int resample_count = 1000;

    void validate() const;
};

class IntegrationFailure : public std::runtime_error {
public:
    enum class Reason { StepSizeUnderflow, NonFiniteState, AlternanceNotReached, InsufficientCoverage };

    IntegrationFailure(Reason reason, std::string message)
        : std::runtime_error(std::move(message)), reason(reason) {}

    Reason reason;
};

/// Adaptive integration record in dimensionless variables. Steps are
/// non-uniform but strictly increasing and land exactly on cycle
/// boundaries; cycle_peaks holds the per-cycle maximum of sigma12_tilde
/// (largest sample, refined by a local quadratic fit).
struct Trajectory {
    std::vector<double> times;
    std::vector<double> s11;
    std::vector<double> s22;
    std::vector<double> s12;
    std::vector<double> cycle_peaks;
    double cycle_period = 0.0;

    int cycles_completed() const { return static_cast<int>(cycle_peaks.size()); }
};

/// Integrates the dimensionless stress ODEs from rest with an adaptive
/// semi-implicit Rosenbrock method, step doubling for the embedded error
/// estimate and advancing the locally extrapolated (third-order) result,
/// cycle by cycle up to max_cycles. Integration stops one full cycle after
/// successive sigma12 peaks agree to the alternance threshold.
Trajectory integrate_cycles(const ModelParams& params, const Loading& loading,
                            const IntegratorOptions& options = {});

/// First cycle index c >= 1 with |p_c - p_{c-1}| / |p_c| below the
/// threshold; empty when the record never settles.
std::optional<int> detect_alternance(const Trajectory& trajectory, double threshold);

/// Cubic-spline interpolation (natural end conditions) of the final full
/// period onto the uniform grid t_i = i * T / N_t.
Waveform resample_period(const Trajectory& trajectory, int resample_count);

struct FourierExtraction {
    CoefficientSets coeffs;  // same units as the analyzed waveform
    double leakage_s11 = 0.0;
    double leakage_s22 = 0.0;
    double leakage_s12 = 0.0;

    double max_leakage() const;
};

/// Discrete Fourier analysis of a uniformly sampled single-period waveform.
/// Per channel, allowed-parity harmonics are retained up to the first whose
/// intensity drops below 1e-12 of the leading one (capped at N_t/2 - 1);
/// forbidden-parity content is reported as a leakage diagnostic relative to
/// the leading harmonic.
FourierExtraction fourier_from_waveform(const Waveform& waveform);

struct IvpSolution {
    Waveform waveform;             // dimensionless, final period
    CoefficientSets coefficients;  // dimensional (Pa)
    FourierExtraction extraction;  // dimensionless coefficients + diagnostics
    int cycles_used = 0;
    double wall_seconds = 0.0;
};

/// Full reference pipeline: integrate to alternance, resample one period,
/// extract Fourier coefficients, dimensionalize. Wall time covers all
/// stages.
IvpSolution solve_ivp(const ModelParams& params, const Loading& loading,
                      const IntegratorOptions& options = {});

}  // namespace ghb
