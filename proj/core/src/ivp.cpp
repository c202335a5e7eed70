#include "ghb/ivp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

namespace ghb {

void IntegratorOptions::validate() const {
    if (!(relative_tolerance > 0.0) || !(absolute_tolerance > 0.0))
        throw std::invalid_argument("IntegratorOptions: tolerances must be > 0");
    if (max_cycles < 1) throw std::invalid_argument("IntegratorOptions: max_cycles must be >= 1");
    if (!(alternance_threshold > 0.0))
        throw std::invalid_argument("IntegratorOptions: alternance threshold must be > 0");
    if (resample_count < 2 || resample_count % 2 != 0)
        throw std::invalid_argument("IntegratorOptions: resample count must be even and >= 2");
}

namespace {

struct Vec3 {
    double x[3];
    double& operator[](int i) { return x[i]; }
    double operator[](int i) const { return x[i]; }
};

inline Vec3 to_vec(const StressState& s) { return {{s.s11, s.s22, s.s12}}; }
inline StressState to_state(const Vec3& v) { return {v[0], v[1], v[2]}; }

inline bool finite(const Vec3& v) {
    return std::isfinite(v[0]) && std::isfinite(v[1]) && std::isfinite(v[2]);
}

// Dense 3x3 solve via Cramer's rule; the Rosenbrock matrix W = I - h*d*J is
// well conditioned for admissible steps.
struct Mat3 {
    double m[9];

    bool factor_determinant(double& det) const {
        det = m[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (m[3] * m[8] - m[5] * m[6]) +
              m[2] * (m[3] * m[7] - m[4] * m[6]);
        return std::isfinite(det) && det != 0.0;
    }

    Vec3 solve(const Vec3& b, double det) const {
        Vec3 r;
        r[0] = (b[0] * (m[4] * m[8] - m[5] * m[7]) - m[1] * (b[1] * m[8] - m[5] * b[2]) +
                m[2] * (b[1] * m[7] - m[4] * b[2])) / det;
        r[1] = (m[0] * (b[1] * m[8] - m[5] * b[2]) - b[0] * (m[3] * m[8] - m[5] * m[6]) +
                m[2] * (m[3] * b[2] - b[1] * m[6])) / det;
        r[2] = (m[0] * (m[4] * b[2] - b[1] * m[7]) - m[1] * (m[3] * b[2] - b[1] * m[6]) +
                b[0] * (m[3] * m[7] - m[4] * m[6])) / det;
        return r;
    }
};

// Largest-sample peak within [first, last], refined by a quadratic through
// the sample and its neighbors when the fitted vertex lies inside them.
double refined_peak(const std::vector<double>& t, const std::vector<double>& y,
                    std::size_t first, std::size_t last) {
    std::size_t j = first;
    for (std::size_t i = first; i <= last; ++i)
        if (y[i] > y[j]) j = i;
    if (j == 0 || j + 1 >= y.size()) return y[j];

    const double t0 = t[j - 1], t1 = t[j], t2 = t[j + 1];
    const double y0 = y[j - 1], y1 = y[j], y2 = y[j + 1];
    const double d1 = (y1 - y0) / (t1 - t0);
    const double d2 = (y2 - y1) / (t2 - t1);
    const double curv = (d2 - d1) / (t2 - t0);
    if (!(curv < 0.0)) return y1;
    const double ts = 0.5 * (t0 + t1) - 0.5 * d1 / curv;
    if (ts < t0 || ts > t2) return y1;
    return y0 + d1 * (ts - t0) + curv * (ts - t0) * (ts - t1);
}

}  // namespace

namespace {

// One L-stable semi-implicit Rosenbrock advance (Shampine-Reichelt stages,
// second order). Returns false when the stage matrix degenerates or the
// result is not finite.
bool rosenbrock_step(double alpha, double de, double wi, const Vec3& y, double t, double h,
                     Vec3& y_new) {
    static const double d = 1.0 / (2.0 + std::sqrt(2.0));

    const StressState state = to_state(y);
    const auto jac = ode_jacobian_dimensionless(alpha, de, wi, state, t);
    const Vec3 ft = to_vec(ode_time_derivative_dimensionless(alpha, de, wi, state, t));
    Mat3 w;
    for (int i = 0; i < 9; ++i) w.m[i] = -h * d * jac[static_cast<std::size_t>(i)];
    w.m[0] += 1.0;
    w.m[4] += 1.0;
    w.m[8] += 1.0;
    double det = 0.0;
    if (!w.factor_determinant(det)) return false;

    const Vec3 f0 = to_vec(ode_rhs_dimensionless(alpha, de, wi, state, t));
    Vec3 rhs1;
    for (int i = 0; i < 3; ++i) rhs1[i] = f0[i] + h * d * ft[i];
    const Vec3 k1 = w.solve(rhs1, det);

    Vec3 y_half;
    for (int i = 0; i < 3; ++i) y_half[i] = y[i] + 0.5 * h * k1[i];
    const Vec3 f1 = to_vec(ode_rhs_dimensionless(alpha, de, wi, to_state(y_half), t + 0.5 * h));
    Vec3 rhs2;
    for (int i = 0; i < 3; ++i) rhs2[i] = f1[i] - k1[i];
    Vec3 k2 = w.solve(rhs2, det);
    for (int i = 0; i < 3; ++i) k2[i] += k1[i];

    for (int i = 0; i < 3; ++i) y_new[i] = y[i] + h * k2[i];
    return finite(y_new);
}

}  // namespace

Trajectory integrate_cycles(const ModelParams& params, const Loading& loading,
                            const IntegratorOptions& options) {
    options.validate();
    const auto [de, wi] = derived_groups(params, loading);
    const double alpha = params.anisotropy();
    const double period = 2.0 * std::numbers::pi / de;

    const double h_max = period / 32.0;
    const double h_floor = period * 1e-14;

    Trajectory traj;
    traj.cycle_period = period;
    traj.times.push_back(0.0);
    traj.s11.push_back(0.0);
    traj.s22.push_back(0.0);
    traj.s12.push_back(0.0);

    Vec3 y{{0.0, 0.0, 0.0}};
    double t = 0.0;
    double h = period / 100.0;
    std::optional<int> settled_at;

    for (int cycle = 0; cycle < options.max_cycles; ++cycle) {
        const double t_end = period * (cycle + 1);
        const std::size_t first_index = traj.times.size() - 1;

        while (t < t_end) {
            bool boundary = false;
            if (t + h >= t_end) {
                h = t_end - t;
                boundary = true;
            }

            // Step doubling with local extrapolation: one full step against
            // two half steps gives an embedded error estimate, and the
            // extrapolated combination advances at third order.
            Vec3 y_full, y_mid, y_two;
            bool ok = rosenbrock_step(alpha, de, wi, y, t, h, y_full) &&
                      rosenbrock_step(alpha, de, wi, y, t, 0.5 * h, y_mid) &&
                      rosenbrock_step(alpha, de, wi, y_mid, t + 0.5 * h, 0.5 * h, y_two);

            Vec3 y_new{{0.0, 0.0, 0.0}};
            double err_norm = std::numeric_limits<double>::infinity();
            if (ok) {
                err_norm = 0.0;
                for (int i = 0; i < 3; ++i) {
                    const double err = (y_two[i] - y_full[i]) / 3.0;
                    y_new[i] = y_two[i] + err;
                    const double sc = options.absolute_tolerance +
                                      options.relative_tolerance *
                                          std::max(std::abs(y[i]), std::abs(y_new[i]));
                    err_norm += (err / sc) * (err / sc);
                }
                err_norm = std::sqrt(err_norm / 3.0);
                ok = finite(y_new) && std::isfinite(err_norm);
            }

            if (!ok) {
                h *= 0.2;
                if (h < h_floor)
                    throw IntegrationFailure(IntegrationFailure::Reason::NonFiniteState,
                                             "integrate_cycles: state diverged");
                continue;
            }

            if (err_norm <= 1.0) {
                t = boundary ? t_end : t + h;
                y = y_new;
                traj.times.push_back(t);
                traj.s11.push_back(y[0]);
                traj.s22.push_back(y[1]);
                traj.s12.push_back(y[2]);
            }

            const double safe = err_norm > 0.0 ? 0.9 * std::pow(err_norm, -1.0 / 3.0) : 5.0;
            h *= std::clamp(safe, 0.2, 5.0);
            h = std::min(h, h_max);
            if (h < h_floor)
                throw IntegrationFailure(IntegrationFailure::Reason::StepSizeUnderflow,
                                         "integrate_cycles: step size underflow");
        }

        traj.cycle_peaks.push_back(
            refined_peak(traj.times, traj.s12, first_index, traj.times.size() - 1));

        if (!settled_at && traj.cycles_completed() >= 2) {
            const auto& p = traj.cycle_peaks;
            const double prev = p[p.size() - 2], cur = p.back();
            const double diff = std::abs(cur - prev);
            if (diff == 0.0 || diff < options.alternance_threshold * std::abs(cur))
                settled_at = cycle;
        } else if (settled_at && cycle > *settled_at) {
            break;  // one post-alternance cycle recorded
        }
    }
    return traj;
}

std::optional<int> detect_alternance(const Trajectory& trajectory, double threshold) {
    const auto& p = trajectory.cycle_peaks;
    for (std::size_t c = 1; c < p.size(); ++c) {
        const double diff = std::abs(p[c] - p[c - 1]);
        if (diff == 0.0 || diff < threshold * std::abs(p[c])) return static_cast<int>(c);
    }
    return std::nullopt;
}

namespace {

// Natural cubic spline over strictly increasing nodes.
class CubicSpline {
public:
    CubicSpline(const double* t, const double* y, std::size_t n) : t_(t), y_(y), n_(n) {
        m_.assign(n, 0.0);
        if (n < 3) return;  // degenerate: linear interpolation
        std::vector<double> u(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double sig = (t[i] - t[i - 1]) / (t[i + 1] - t[i - 1]);
            const double p = sig * m_[i - 1] + 2.0;
            m_[i] = (sig - 1.0) / p;
            const double slope_r = (y[i + 1] - y[i]) / (t[i + 1] - t[i]);
            const double slope_l = (y[i] - y[i - 1]) / (t[i] - t[i - 1]);
            u[i] = (6.0 * (slope_r - slope_l) / (t[i + 1] - t[i - 1]) - sig * u[i - 1]) / p;
        }
        m_[n - 1] = 0.0;
        for (std::size_t k = n - 1; k-- > 0;) m_[k] = m_[k] * m_[k + 1] + u[k];
    }

    double operator()(double x) const {
        std::size_t i = segment(x);
        const double h = t_[i + 1] - t_[i];
        if (n_ < 3) return y_[i] + (y_[i + 1] - y_[i]) * (x - t_[i]) / h;
        const double a = (t_[i + 1] - x) / h;
        const double b = (x - t_[i]) / h;
        return a * y_[i] + b * y_[i + 1] +
               ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
    }

private:
    std::size_t segment(double x) const {
        auto it = std::upper_bound(t_, t_ + n_, x);
        std::size_t i = it == t_ ? 0 : static_cast<std::size_t>(it - t_) - 1;
        return std::min(i, n_ - 2);
    }

    const double* t_;
    const double* y_;
    std::size_t n_;
    std::vector<double> m_;  // second derivatives at nodes
};

}  // namespace

Waveform resample_period(const Trajectory& trajectory, int resample_count) {
    const double period = trajectory.cycle_period;
    if (trajectory.times.size() < 2 || period <= 0.0)
        throw IntegrationFailure(IntegrationFailure::Reason::InsufficientCoverage,
                                 "resample_period: empty trajectory");
    const double t_end = trajectory.times.back();
    const double t_start = t_end - period;
    if (trajectory.times.front() > t_start + 1e-12 * period)
        throw IntegrationFailure(IntegrationFailure::Reason::InsufficientCoverage,
                                 "resample_period: trajectory shorter than one period");

    const auto begin = std::lower_bound(trajectory.times.begin(), trajectory.times.end(),
                                        t_start - 1e-12 * period);
    const auto first = static_cast<std::size_t>(begin - trajectory.times.begin());
    const std::size_t n = trajectory.times.size() - first;
    if (n < 2)
        throw IntegrationFailure(IntegrationFailure::Reason::InsufficientCoverage,
                                 "resample_period: too few nodes in final period");

    const double* ts = trajectory.times.data() + first;
    CubicSpline sp11(ts, trajectory.s11.data() + first, n);
    CubicSpline sp22(ts, trajectory.s22.data() + first, n);
    CubicSpline sp12(ts, trajectory.s12.data() + first, n);

    Waveform wf;
    wf.dimensionless = true;
    const auto count = static_cast<std::size_t>(resample_count);
    wf.times.resize(count);
    wf.s11.resize(count);
    wf.s22.resize(count);
    wf.s12.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
        const double tau = static_cast<double>(i) * period / resample_count;
        const double x = std::min(t_start + tau, t_end);
        wf.times[i] = tau;
        wf.s11[i] = sp11(x);
        wf.s22[i] = sp22(x);
        wf.s12[i] = sp12(x);
    }
    return wf;
}

double FourierExtraction::max_leakage() const {
    return std::max({leakage_s11, leakage_s22, leakage_s12});
}

namespace {

constexpr double kRetentionCutoff = 1e-12;

// One-sided DFT coefficients c_n = (1/N) sum_i x_i e^{-2*pi*i*n*k/N}.
std::vector<Complex> dft_half(const std::vector<double>& x) {
    const std::size_t n_samples = x.size();
    const std::size_t n_half = n_samples / 2;  // harmonics 0 .. N/2 - 1
    std::vector<Complex> out(n_half);
    for (std::size_t n = 0; n < n_half; ++n) {
        const Complex step = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(n) /
                                                 static_cast<double>(n_samples));
        Complex w{1.0, 0.0};
        Complex acc{0.0, 0.0};
        for (std::size_t i = 0; i < n_samples; ++i) {
            acc += x[i] * w;
            w *= step;
        }
        out[n] = acc / static_cast<double>(n_samples);
    }
    return out;
}

struct ChannelExtract {
    std::vector<Complex> kept;
    double leakage = 0.0;
};

ChannelExtract retain_channel(const std::vector<Complex>& full, int allowed_parity) {
    const int n_harm = static_cast<int>(full.size());
    const int lead = allowed_parity == 0 ? 0 : 1;
    const double lead_mag = std::abs(full[static_cast<std::size_t>(lead)]);

    int cut = n_harm;  // first allowed harmonic below the cutoff
    for (int n = lead; n < n_harm; n += 2) {
        if (std::abs(full[static_cast<std::size_t>(n)]) < kRetentionCutoff * lead_mag) {
            cut = n;
            break;
        }
    }

    ChannelExtract out;
    out.kept.assign(static_cast<std::size_t>(std::max(cut, lead + 1)), {0.0, 0.0});
    for (int n = lead; n < cut; n += 2)
        out.kept[static_cast<std::size_t>(n)] = full[static_cast<std::size_t>(n)];

    double forbidden = 0.0;
    for (int n = 1 - allowed_parity; n < n_harm; n += 2)
        forbidden = std::max(forbidden, std::abs(full[static_cast<std::size_t>(n)]));
    out.leakage = lead_mag > 0.0 ? forbidden / lead_mag
                                 : std::numeric_limits<double>::quiet_NaN();
    return out;
}

}  // namespace

FourierExtraction fourier_from_waveform(const Waveform& waveform) {
    const auto full11 = dft_half(waveform.s11);
    const auto full22 = dft_half(waveform.s22);
    const auto full12 = dft_half(waveform.s12);

    const ChannelExtract e11 = retain_channel(full11, 0);
    const ChannelExtract e22 = retain_channel(full22, 0);
    const ChannelExtract e12 = retain_channel(full12, 1);

    FourierExtraction out;
    out.coeffs.s11 = e11.kept;
    out.coeffs.s22 = e22.kept;
    out.coeffs.s12 = e12.kept;
    out.leakage_s11 = e11.leakage;
    out.leakage_s22 = e22.leakage;
    out.leakage_s12 = e12.leakage;
    return out;
}

IvpSolution solve_ivp(const ModelParams& params, const Loading& loading,
                      const IntegratorOptions& options) {
    options.validate();
    const auto start = std::chrono::steady_clock::now();

    const Trajectory traj = integrate_cycles(params, loading, options);
    const std::optional<int> settled = detect_alternance(traj, options.alternance_threshold);
    if (!settled)
        throw IntegrationFailure(IntegrationFailure::Reason::AlternanceNotReached,
                                 "solve_ivp: alternance not reached within max_cycles");

    IvpSolution out;
    out.waveform = resample_period(traj, options.resample_count);
    out.extraction = fourier_from_waveform(out.waveform);
    const double scale = params.modulus() * derived_groups(params, loading).weissenberg;
    out.coefficients = out.extraction.coeffs;
    for (auto* ch : {&out.coefficients.s11, &out.coefficients.s22, &out.coefficients.s12})
        for (auto& c : *ch) c *= scale;
    out.cycles_used = traj.cycles_completed();

    const auto stop = std::chrono::steady_clock::now();
    out.wall_seconds = std::chrono::duration<double>(stop - start).count();
    return out;
}

}  // namespace ghb
