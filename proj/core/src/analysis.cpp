#include "ghb/analysis.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace ghb {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> sum_series(const std::vector<Complex>& coeffs, int sample_count,
                               bool derivative, double angular) {
    const auto count = static_cast<std::size_t>(sample_count);
    std::vector<double> out(count, 0.0);
    const int n_max = static_cast<int>(coeffs.size()) - 1;
    for (std::size_t i = 0; i < count; ++i) {
        const double theta =
            2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(sample_count);
        const Complex rot = std::polar(1.0, theta);
        Complex w{1.0, 0.0};
        double acc = 0.0;
        for (int n = 0; n <= n_max; ++n) {
            Complex c = coeffs[static_cast<std::size_t>(n)];
            if (derivative) c *= Complex{0.0, n * angular};
            acc += (n == 0 ? 1.0 : 2.0) * (c * w).real();
            w *= rot;
        }
        out[i] = acc;
    }
    return out;
}

double max_abs(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

Complex coeff_at(const std::vector<Complex>& c, int n) {
    if (n < 0 || n >= static_cast<int>(c.size())) return {0.0, 0.0};
    return c[static_cast<std::size_t>(n)];
}

}  // namespace

Waveform evaluate_waveform(const SpectralSolution& solution, int sample_count) {
    const int highest = 2 * solution.truncation() - 1;
    if (sample_count < 2 * highest + 1)
        throw std::invalid_argument("evaluate_waveform: sample count below Nyquist for 2H-1");
    return evaluate_waveform(to_coefficient_sets(solution), solution.loading().period(),
                             sample_count, false);
}

Waveform evaluate_waveform(const CoefficientSets& coeffs, double period, int sample_count,
                           bool dimensionless) {
    if (sample_count < 2) throw std::invalid_argument("evaluate_waveform: sample count too small");
    Waveform wf;
    wf.dimensionless = dimensionless;
    wf.s11 = sum_series(coeffs.s11, sample_count, false, 0.0);
    wf.s22 = sum_series(coeffs.s22, sample_count, false, 0.0);
    wf.s12 = sum_series(coeffs.s12, sample_count, false, 0.0);
    wf.times.resize(static_cast<std::size_t>(sample_count));
    for (int i = 0; i < sample_count; ++i)
        wf.times[static_cast<std::size_t>(i)] = static_cast<double>(i) * period / sample_count;
    return wf;
}

ChannelSamples evaluate_derivative(const CoefficientSets& coeffs, double period,
                                   int sample_count) {
    if (sample_count < 2)
        throw std::invalid_argument("evaluate_derivative: sample count too small");
    const double angular = 2.0 * std::numbers::pi / period;
    ChannelSamples d;
    d.s11 = sum_series(coeffs.s11, sample_count, true, angular);
    d.s22 = sum_series(coeffs.s22, sample_count, true, angular);
    d.s12 = sum_series(coeffs.s12, sample_count, true, angular);
    return d;
}

ResidualReport residual_error(const CoefficientSets& dimensional, const ModelParams& params,
                              const Loading& loading, int sample_count, std::string_view source) {
    const auto [de, wi] = derived_groups(params, loading);
    const double scale = params.modulus() * wi;

    CoefficientSets tilde = dimensional;
    for (auto* ch : {&tilde.s11, &tilde.s22, &tilde.s12})
        for (auto& c : *ch) c /= scale;

    const double period = 2.0 * std::numbers::pi / de;
    const Waveform wf = evaluate_waveform(tilde, period, sample_count, true);
    const ChannelSamples dv = evaluate_derivative(tilde, period, sample_count);

    double ss11 = 0.0, ss22 = 0.0, ss12 = 0.0;
    for (int i = 0; i < sample_count; ++i) {
        const auto ui = static_cast<std::size_t>(i);
        const StressState state{wf.s11[ui], wf.s22[ui], wf.s12[ui]};
        const StressState rhs =
            ode_rhs_dimensionless(params.anisotropy(), de, wi, state, wf.times[ui]);
        const double r11 = dv.s11[ui] - rhs.s11;
        const double r22 = dv.s22[ui] - rhs.s22;
        const double r12 = dv.s12[ui] - rhs.s12;
        ss11 += r11 * r11;
        ss22 += r22 * r22;
        ss12 += r12 * r12;
    }

    ResidualReport report;
    report.sample_count = sample_count;
    report.source = std::string(source);
    report.rms_s11 = std::sqrt(ss11 / sample_count);
    report.rms_s22 = std::sqrt(ss22 / sample_count);
    report.rms_s12 = std::sqrt(ss12 / sample_count);
    report.epsilon_r = std::sqrt(ss11 + ss22 + ss12) / (3.0 * sample_count);
    return report;
}

HarmonicSpectrum moduli_from_coefficients(const CoefficientSets& dimensional,
                                          const Loading& loading) {
    const double g0 = loading.strain_amplitude();
    const double g02 = g0 * g0;
    const int n_max = std::max({static_cast<int>(dimensional.s11.size()),
                                static_cast<int>(dimensional.s22.size()),
                                static_cast<int>(dimensional.s12.size())}) - 1;
    const auto size = static_cast<std::size_t>(std::max(n_max, 1)) + 1;

    HarmonicSpectrum sp;
    for (auto* v : {&sp.g_prime, &sp.g_dprime, &sp.f_prime, &sp.f_dprime, &sp.s_prime,
                    &sp.s_dprime, &sp.p_prime, &sp.p_dprime, &sp.q_prime, &sp.q_dprime})
        v->assign(size, 0.0);

    for (int n = 1; n <= n_max; n += 2) {
        const Complex c = coeff_at(dimensional.s12, n);
        sp.g_prime[static_cast<std::size_t>(n)] = -2.0 * c.imag() / g0;
        sp.g_dprime[static_cast<std::size_t>(n)] = 2.0 * c.real() / g0;
    }
    for (int n = 0; n <= n_max; n += 2) {
        const auto un = static_cast<std::size_t>(n);
        const Complex p = coeff_at(dimensional.s11, n);
        const Complex q = coeff_at(dimensional.s22, n);
        if (n == 0) {
            sp.p_dprime[un] = p.real() / g02;
            sp.q_dprime[un] = q.real() / g02;
        } else {
            sp.p_prime[un] = -2.0 * p.imag() / g02;
            sp.p_dprime[un] = 2.0 * p.real() / g02;
            sp.q_prime[un] = -2.0 * q.imag() / g02;
            sp.q_dprime[un] = 2.0 * q.real() / g02;
        }
        sp.f_prime[un] = sp.p_prime[un] - sp.q_prime[un];
        sp.f_dprime[un] = sp.p_dprime[un] - sp.q_dprime[un];
        sp.s_prime[un] = sp.q_prime[un];
        sp.s_dprime[un] = sp.q_dprime[un];
    }
    return sp;
}

HarmonicSpectrum moduli_from_coefficients(const SpectralSolution& solution) {
    return moduli_from_coefficients(to_coefficient_sets(solution), solution.loading());
}

CoefficientSets coefficients_from_moduli(const HarmonicSpectrum& spectrum,
                                         const Loading& loading) {
    const double g0 = loading.strain_amplitude();
    const double g02 = g0 * g0;
    const auto size = spectrum.g_prime.size();

    CoefficientSets sets;
    sets.s11.assign(size, {0.0, 0.0});
    sets.s22.assign(size, {0.0, 0.0});
    sets.s12.assign(size, {0.0, 0.0});
    for (std::size_t n = 0; n < size; ++n) {
        if (n % 2 == 1) {
            sets.s12[n] = 0.5 * g0 * Complex{spectrum.g_dprime[n], -spectrum.g_prime[n]};
        } else if (n == 0) {
            sets.s11[n] = Complex{g02 * spectrum.p_dprime[n], 0.0};
            sets.s22[n] = Complex{g02 * spectrum.q_dprime[n], 0.0};
        } else {
            sets.s11[n] = 0.5 * g02 * Complex{spectrum.p_dprime[n], -spectrum.p_prime[n]};
            sets.s22[n] = 0.5 * g02 * Complex{spectrum.q_dprime[n], -spectrum.q_prime[n]};
        }
    }
    return sets;
}

HarmonicIntensities harmonic_intensities(const HarmonicSpectrum& spectrum) {
    const auto size = spectrum.g_prime.size();
    HarmonicIntensities out;
    out.shear.assign(size, 0.0);
    out.n1.assign(size, 0.0);
    out.n2.assign(size, 0.0);
    for (std::size_t n = 0; n < size; ++n) {
        if (n % 2 == 1) {
            out.shear[n] = std::hypot(spectrum.g_prime[n], spectrum.g_dprime[n]);
        } else {
            out.n1[n] = std::hypot(spectrum.f_prime[n], spectrum.f_dprime[n]);
            out.n2[n] = std::hypot(spectrum.s_prime[n], spectrum.s_dprime[n]);
        }
    }
    const double lead_shear = size > 1 ? out.shear[1] : 0.0;
    const double lead_n1 = out.n1.empty() ? 0.0 : out.n1[0];
    const double lead_n2 = out.n2.empty() ? 0.0 : out.n2[0];
    auto ratios = [size](const std::vector<double>& v, double lead) {
        std::vector<double> r(size, kNaN);
        if (lead > 0.0)
            for (std::size_t n = 0; n < size; ++n) r[n] = v[n] / lead;
        return r;
    };
    out.shear_ratio = ratios(out.shear, lead_shear);
    out.n1_ratio = ratios(out.n1, lead_n1);
    out.n2_ratio = ratios(out.n2, lead_n2);
    return out;
}

LissajousData lissajous_data(const Waveform& waveform) {
    const int count = waveform.sample_count();
    std::vector<double> n1(static_cast<std::size_t>(count)), n2(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        n1[static_cast<std::size_t>(i)] = waveform.n1(i);
        n2[static_cast<std::size_t>(i)] = waveform.n2(i);
    }

    LissajousData out;
    out.max_s12 = max_abs(waveform.s12);
    out.max_n1 = max_abs(n1);
    out.max_n2 = max_abs(n2);
    if (out.max_s12 == 0.0 || out.max_n1 == 0.0 || out.max_n2 == 0.0)
        throw std::invalid_argument("lissajous_data: cannot normalize an identically zero channel");

    auto fill = [count](LissajousCurve& curve, const std::vector<double>& stress, double scale,
                        bool elastic) {
        curve.input.resize(static_cast<std::size_t>(count));
        curve.stress.resize(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i) {
            const double phase =
                2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
            const auto ui = static_cast<std::size_t>(i);
            curve.input[ui] = elastic ? std::sin(phase) : std::cos(phase);
            curve.stress[ui] = stress[ui] / scale;
        }
    };
    fill(out.elastic_s12, waveform.s12, out.max_s12, true);
    fill(out.viscous_s12, waveform.s12, out.max_s12, false);
    fill(out.elastic_n1, n1, out.max_n1, true);
    fill(out.viscous_n1, n1, out.max_n1, false);
    fill(out.elastic_n2, n2, out.max_n2, true);
    fill(out.viscous_n2, n2, out.max_n2, false);
    return out;
}

ConvergenceStudy convergence_errors(const std::vector<SpectralSolution>& solutions,
                                    const SpectralSolution& reference) {
    constexpr int kGrid = 1000;
    ConvergenceStudy study;
    study.reference_truncation = reference.truncation();

    const Waveform ref = evaluate_waveform(reference, kGrid);
    std::vector<double> ref_n1(kGrid), ref_n2(kGrid);
    for (int i = 0; i < kGrid; ++i) {
        ref_n1[static_cast<std::size_t>(i)] = ref.n1(i);
        ref_n2[static_cast<std::size_t>(i)] = ref.n2(i);
    }
    study.scale_shear = max_abs(ref.s12);
    study.scale_n1 = max_abs(ref_n1);
    study.scale_n2 = max_abs(ref_n2);

    for (const SpectralSolution& sol : solutions) {
        if (!(sol.params() == reference.params()) || !(sol.loading() == reference.loading()))
            throw std::invalid_argument("convergence_errors: mismatched parameters or loading");
        if (sol.truncation() >= reference.truncation())
            throw std::invalid_argument("convergence_errors: reference truncation must exceed all tested H");
        const Waveform wf = evaluate_waveform(sol, kGrid);
        double xg = 0.0, xf = 0.0, xs = 0.0;
        for (int i = 0; i < kGrid; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            xg = std::max(xg, std::abs(wf.s12[ui] - ref.s12[ui]));
            xf = std::max(xf, std::abs(wf.n1(i) - ref_n1[ui]));
            xs = std::max(xs, std::abs(wf.n2(i) - ref_n2[ui]));
        }
        study.truncations.push_back(sol.truncation());
        study.xi_shear.push_back(xg);
        study.xi_n1.push_back(xf);
        study.xi_n2.push_back(xs);
    }
    return study;
}

DecayFit fit_decay(const std::vector<double>& abscissa, const std::vector<double>& xi,
                   double floor_value) {
    if (abscissa.size() != xi.size())
        throw std::invalid_argument("fit_decay: abscissa and xi lengths differ");

    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < xi.size(); ++i) {
        if (xi[i] > floor_value) {
            xs.push_back(abscissa[i]);
            ys.push_back(std::log(xi[i]));
        }
    }
    if (xs.size() < 3)
        throw std::invalid_argument("fit_decay: fewer than 3 points above the floor");

    const double n = static_cast<double>(xs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / n;

    double ss_res = 0.0, ss_tot = 0.0;
    const double mean_y = sy / n;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double fit = intercept + slope * xs[i];
        ss_res += (ys[i] - fit) * (ys[i] - fit);
        ss_tot += (ys[i] - mean_y) * (ys[i] - mean_y);
    }

    DecayFit out;
    out.decay = -slope;
    out.prefactor = std::exp(intercept);
    out.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    out.points_used = static_cast<int>(xs.size());
    return out;
}

ConvergenceFits fit_decay(const ConvergenceStudy& study, double solver_tolerance) {
    std::vector<double> abs_shear, abs_normal;
    for (int h : study.truncations) {
        abs_shear.push_back(2.0 * h - 1.0);
        abs_normal.push_back(2.0 * h - 2.0);
    }
    ConvergenceFits fits;
    fits.shear = fit_decay(abs_shear, study.xi_shear, 10.0 * solver_tolerance * study.scale_shear);
    fits.n1 = fit_decay(abs_normal, study.xi_n1, 10.0 * solver_tolerance * study.scale_n1);
    fits.n2 = fit_decay(abs_normal, study.xi_n2, 10.0 * solver_tolerance * study.scale_n2);
    return fits;
}

namespace {

double median3(double a, double b, double c) {
    return std::max(std::min(a, b), std::min(std::max(a, b), c));
}

}  // namespace

ComparisonRecord compare_hb_ni(const ModelParams& params, const Loading& loading, int truncation,
                               const SolverOptions& solver_options,
                               const IntegratorOptions& integrator_options) {
    using clock = std::chrono::steady_clock;
    ComparisonRecord record;

    double hb_times[3] = {0.0, 0.0, 0.0};
    SpectralSolution hb = ladder_solve(params, loading, truncation, solver_options);
    for (int rep = 0; rep < 3; ++rep) {
        const auto t0 = clock::now();
        hb = ladder_solve(params, loading, truncation, solver_options);
        hb_times[rep] = std::chrono::duration<double>(clock::now() - t0).count();
    }

    double ni_times[3] = {0.0, 0.0, 0.0};
    IvpSolution ni = solve_ivp(params, loading, integrator_options);
    for (int rep = 0; rep < 3; ++rep) {
        ni = solve_ivp(params, loading, integrator_options);
        ni_times[rep] = ni.wall_seconds;
    }

    record.hb_seconds = median3(hb_times[0], hb_times[1], hb_times[2]);
    record.ni_seconds = median3(ni_times[0], ni_times[1], ni_times[2]);
    record.speedup = record.hb_seconds > 0.0 ? record.ni_seconds / record.hb_seconds
                                             : std::numeric_limits<double>::infinity();
    record.ni_cycles = ni.cycles_used;

    record.hb_residual =
        residual_error(to_coefficient_sets(hb), params, loading, 1000, "HB");
    record.ni_residual = residual_error(ni.coefficients, params, loading, 1000, "NI");

    const HarmonicSpectrum sp_hb = moduli_from_coefficients(hb);
    const HarmonicSpectrum sp_ni = moduli_from_coefficients(ni.coefficients, loading);
    const HarmonicIntensities in_hb = harmonic_intensities(sp_hb);

    auto entry = [](const std::vector<double>& v, int n) {
        return n < static_cast<int>(v.size()) ? v[static_cast<std::size_t>(n)] : 0.0;
    };
    double worst = 0.0;
    auto track = [&worst](double a, double b, double scale) {
        if (scale > 0.0) worst = std::max(worst, std::abs(a - b) / scale);
    };
    const double lead_shear = entry(in_hb.shear, 1);
    const double lead_n1 = entry(in_hb.n1, 0);
    const double lead_n2 = entry(in_hb.n2, 0);
    for (int n : {1, 3}) {
        track(entry(sp_hb.g_prime, n), entry(sp_ni.g_prime, n), lead_shear);
        track(entry(sp_hb.g_dprime, n), entry(sp_ni.g_dprime, n), lead_shear);
    }
    for (int n : {0, 2}) {
        track(entry(sp_hb.f_prime, n), entry(sp_ni.f_prime, n), lead_n1);
        track(entry(sp_hb.f_dprime, n), entry(sp_ni.f_dprime, n), lead_n1);
        track(entry(sp_hb.s_prime, n), entry(sp_ni.s_prime, n), lead_n2);
        track(entry(sp_hb.s_dprime, n), entry(sp_ni.s_dprime, n), lead_n2);
    }
    record.max_moduli_rel_diff = worst;
    return record;
}

}  // namespace ghb
