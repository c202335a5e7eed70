#include "ghb/hb.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ghb {

namespace {

// Packed real-vector layout shared by unknowns, residuals, and the Jacobian.
struct Layout {
    int h;
    int size() const { return 6 * h - 2; }
    int block_b() const { return 2 * h - 1; }
    int block_c() const { return 4 * h - 2; }

    // Column/row index of Re A_{2p}; Im follows at +1 for p >= 1.
    int a_re(int p) const { return p == 0 ? 0 : 2 * p - 1; }
    int b_re(int p) const { return block_b() + a_re(p); }
    int c_re(int p) const { return block_c() + 2 * p; }
};

struct FullSeries {
    IndexedCoeffs a, b, ab, c;
};

FullSeries expand(const PackedCoefficients& coeffs, int h) {
    const int even_max = 2 * h - 2;
    const int odd_max = 2 * h - 1;
    FullSeries s;
    s.a = IndexedCoeffs(-even_max, even_max);
    s.b = IndexedCoeffs(-even_max, even_max);
    s.ab = IndexedCoeffs(-even_max, even_max);
    s.c = IndexedCoeffs(-odd_max, odd_max);
    for (int k = 0; k < h; ++k) {
        const auto uk = static_cast<std::size_t>(k);
        s.a.set(2 * k, coeffs.a[uk]);
        s.b.set(2 * k, coeffs.b[uk]);
        s.ab.set(2 * k, coeffs.a[uk] + coeffs.b[uk]);
        s.c.set(2 * k + 1, coeffs.c[uk]);
        if (k > 0) {
            s.a.set(-2 * k, std::conj(coeffs.a[uk]));
            s.b.set(-2 * k, std::conj(coeffs.b[uk]));
            s.ab.set(-2 * k, std::conj(coeffs.a[uk] + coeffs.b[uk]));
        }
        s.c.set(-(2 * k + 1), std::conj(coeffs.c[uk]));
    }
    return s;
}

void check_length(const UnknownVector& v, int h, const char* where) {
    if (v.size() != 6 * h - 2) {
        std::ostringstream msg;
        msg << where << ": unknown vector has length " << v.size() << ", expected " << 6 * h - 2;
        throw std::invalid_argument(msg.str());
    }
}

}  // namespace

UnknownVector pack_unknowns(const PackedCoefficients& coeffs) {
    const int h = static_cast<int>(coeffs.a.size());
    Layout lay{h};
    UnknownVector v(lay.size());
    v[lay.a_re(0)] = coeffs.a[0].real();
    v[lay.b_re(0)] = coeffs.b[0].real();
    for (int p = 1; p < h; ++p) {
        const auto up = static_cast<std::size_t>(p);
        v[lay.a_re(p)] = coeffs.a[up].real();
        v[lay.a_re(p) + 1] = coeffs.a[up].imag();
        v[lay.b_re(p)] = coeffs.b[up].real();
        v[lay.b_re(p) + 1] = coeffs.b[up].imag();
    }
    for (int p = 0; p < h; ++p) {
        const auto up = static_cast<std::size_t>(p);
        v[lay.c_re(p)] = coeffs.c[up].real();
        v[lay.c_re(p) + 1] = coeffs.c[up].imag();
    }
    return v;
}

PackedCoefficients unpack_unknowns(const UnknownVector& v, int truncation) {
    check_length(v, truncation, "unpack_unknowns");
    Layout lay{truncation};
    PackedCoefficients coeffs;
    const auto h = static_cast<std::size_t>(truncation);
    coeffs.a.assign(h, {0.0, 0.0});
    coeffs.b.assign(h, {0.0, 0.0});
    coeffs.c.assign(h, {0.0, 0.0});
    coeffs.a[0] = {v[lay.a_re(0)], 0.0};
    coeffs.b[0] = {v[lay.b_re(0)], 0.0};
    for (int p = 1; p < truncation; ++p) {
        const auto up = static_cast<std::size_t>(p);
        coeffs.a[up] = {v[lay.a_re(p)], v[lay.a_re(p) + 1]};
        coeffs.b[up] = {v[lay.b_re(p)], v[lay.b_re(p) + 1]};
    }
    for (int p = 0; p < truncation; ++p) {
        const auto up = static_cast<std::size_t>(p);
        coeffs.c[up] = {v[lay.c_re(p)], v[lay.c_re(p) + 1]};
    }
    return coeffs;
}

UnknownVector pack_solution(const SpectralSolution& solution) {
    return pack_unknowns({solution.a(), solution.b(), solution.c()});
}

SpectralSolution unpack_solution(const UnknownVector& v, int truncation,
                                 const ModelParams& params, const Loading& loading) {
    PackedCoefficients coeffs = unpack_unknowns(v, truncation);
    return SpectralSolution(truncation, std::move(coeffs.a), std::move(coeffs.b),
                            std::move(coeffs.c), params, loading);
}

void SolverOptions::validate() const {
    if (!(tolerance > 0.0)) throw std::invalid_argument("SolverOptions: tolerance must be > 0");
    if (max_iterations < 1) throw std::invalid_argument("SolverOptions: max_iterations must be >= 1");
    if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0))
        throw std::invalid_argument("SolverOptions: backtrack factor must be in (0,1)");
    if (!(min_step_fraction > 0.0 && min_step_fraction <= 1.0))
        throw std::invalid_argument("SolverOptions: min step fraction must be in (0,1]");
    for (std::size_t i = 0; i + 1 < ladder_rungs.size(); ++i)
        if (!(ladder_rungs[i] < ladder_rungs[i + 1]))
            throw std::invalid_argument("SolverOptions: ladder rungs must be strictly increasing");
    for (double r : ladder_rungs)
        if (!(r > 0.0)) throw std::invalid_argument("SolverOptions: ladder rungs must be positive");
}

Eigen::VectorXd residual(const UnknownVector& v, const ModelParams& params,
                         const Loading& loading, int truncation) {
    check_length(v, truncation, "residual");
    const Layout lay{truncation};
    const int h = truncation;
    const int even_max = 2 * h - 2;
    const int odd_max = 2 * h - 1;

    const double lambda = params.relaxation_time();
    const double omega = loading.angular_frequency();
    const double kq = params.anisotropy() / (lambda * params.modulus());
    const double g0w = loading.strain_amplitude() * omega;
    const double force = 0.5 * params.modulus() * g0w;

    const FullSeries s = expand(unpack_unknowns(v, truncation), h);
    const IndexedCoeffs aa = convolve_truncated(s.a, s.a, even_max);
    const IndexedCoeffs bb = convolve_truncated(s.b, s.b, even_max);
    const IndexedCoeffs cc = convolve_truncated(s.c, s.c, even_max);
    const IndexedCoeffs cab = convolve_truncated(s.c, s.ab, odd_max);

    Eigen::VectorXd r(lay.size());
    for (int k = 0; k < h; ++k) {
        const Complex lin{1.0 / lambda, 2.0 * k * omega};
        const Complex r11 = kq * (aa.at(2 * k) + cc.at(2 * k)) + lin * s.a.at(2 * k) -
                            g0w * (s.c.at(2 * k - 1) + s.c.at(2 * k + 1));
        const Complex r22 = kq * (bb.at(2 * k) + cc.at(2 * k)) + lin * s.b.at(2 * k);
        if (k == 0) {
            r[lay.a_re(0)] = r11.real();
            r[lay.b_re(0)] = r22.real();
        } else {
            r[lay.a_re(k)] = r11.real();
            r[lay.a_re(k) + 1] = r11.imag();
            r[lay.b_re(k)] = r22.real();
            r[lay.b_re(k) + 1] = r22.imag();
        }

        const int q = 2 * k + 1;
        const Complex lin12{1.0 / lambda, q * omega};
        Complex r12 = lin12 * s.c.at(q) + kq * cab.at(q) -
                      0.5 * g0w * (s.b.at(2 * k) + s.b.at(2 * k + 2));
        if (k == 0) r12 -= force;
        r[lay.c_re(k)] = r12.real();
        r[lay.c_re(k) + 1] = r12.imag();
    }
    return r;
}

namespace {

// Accumulates the real Jacobian block for one complex residual row and one
// stored complex coefficient, given the Wirtinger derivatives dplus = dR/dz
// and dminus = dR/dconj(z).
inline void write_block(Eigen::MatrixXd& jac, int row, bool row_is_real, int col_re,
                        bool col_has_im, Complex dplus, Complex dminus) {
    const Complex dx = dplus + dminus;
    const Complex dy = Complex{0.0, 1.0} * (dplus - dminus);
    jac(row, col_re) += dx.real();
    if (col_has_im) jac(row, col_re + 1) += dy.real();
    if (!row_is_real) {
        jac(row + 1, col_re) += dx.imag();
        if (col_has_im) jac(row + 1, col_re + 1) += dy.imag();
    }
}

}  // namespace

Eigen::MatrixXd jacobian(const UnknownVector& v, const ModelParams& params,
                         const Loading& loading, int truncation) {
    check_length(v, truncation, "jacobian");
    const Layout lay{truncation};
    const int h = truncation;

    const double lambda = params.relaxation_time();
    const double omega = loading.angular_frequency();
    const double kq = params.anisotropy() / (lambda * params.modulus());
    const double g0w = loading.strain_amplitude() * omega;

    const FullSeries s = expand(unpack_unknowns(v, truncation), h);
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(lay.size(), lay.size());

    for (int k = 0; k < h; ++k) {
        const Complex lin{1.0 / lambda, 2.0 * k * omega};
        const int row11 = lay.a_re(k);
        const int row22 = lay.b_re(k);
        const bool real_row = (k == 0);

        for (int p = 0; p < h; ++p) {
            // d R11_k / d A_{2p} and d R22_k / d B_{2p}
            Complex dplus = 2.0 * kq * s.a.at(2 * (k - p));
            Complex dminus = p > 0 ? 2.0 * kq * s.a.at(2 * (k + p)) : Complex{0.0, 0.0};
            if (p == k) dplus += lin;
            write_block(jac, row11, real_row, lay.a_re(p), p > 0, dplus, dminus);

            dplus = 2.0 * kq * s.b.at(2 * (k - p));
            dminus = p > 0 ? 2.0 * kq * s.b.at(2 * (k + p)) : Complex{0.0, 0.0};
            if (p == k) dplus += lin;
            write_block(jac, row22, real_row, lay.b_re(p), p > 0, dplus, dminus);

            // d {R11_k, R22_k} / d C_{2p+1}
            const int pq = 2 * p + 1;
            Complex dplus_c = 2.0 * kq * s.c.at(2 * k - pq);
            Complex dminus_c = 2.0 * kq * s.c.at(2 * k + pq);
            write_block(jac, row22, real_row, lay.c_re(p), true, dplus_c, dminus_c);
            if (pq == 2 * k - 1 || pq == 2 * k + 1) dplus_c -= g0w;
            if (k == 0 && p == 0) dminus_c -= g0w;
            write_block(jac, row11, real_row, lay.c_re(p), true, dplus_c, dminus_c);
        }

        const int q = 2 * k + 1;
        const Complex lin12{1.0 / lambda, q * omega};
        const int row12 = lay.c_re(k);
        for (int p = 0; p < h; ++p) {
            const int pq = 2 * p + 1;
            Complex dplus = kq * s.ab.at(q - pq);
            Complex dminus = kq * s.ab.at(q + pq);
            if (p == k) dplus += lin12;
            write_block(jac, row12, false, lay.c_re(p), true, dplus, dminus);

            // d R12_k / d A_{2p} and / d B_{2p}; B also carries the forcing
            // coupling -g0w (B_{2k} + B_{2k+2}) / 2.
            const Complex cross_plus = kq * s.c.at(q - 2 * p);
            const Complex cross_minus = p > 0 ? kq * s.c.at(q + 2 * p) : Complex{0.0, 0.0};
            write_block(jac, row12, false, lay.a_re(p), p > 0, cross_plus, cross_minus);
            Complex b_plus = cross_plus;
            if (2 * p == 2 * k || 2 * p == 2 * k + 2) b_plus -= 0.5 * g0w;
            write_block(jac, row12, false, lay.b_re(p), p > 0, b_plus, cross_minus);
        }
    }
    return jac;
}

NewtonResult newton_solve(const UnknownVector& v0, const ModelParams& params,
                          const Loading& loading, int truncation, const SolverOptions& options) {
    options.validate();
    check_length(v0, truncation, "newton_solve");

    UnknownVector v = v0;
    Eigen::VectorXd r = residual(v, params, loading, truncation);
    double norm_inf = r.lpNorm<Eigen::Infinity>();

    UnknownVector best_v = v;
    double best_norm = norm_inf;

    for (int it = 0; it < options.max_iterations; ++it) {
        if (norm_inf < options.tolerance) return {v, it, norm_inf};

        const Eigen::MatrixXd jac = jacobian(v, params, loading, truncation);
        const Eigen::VectorXd step = jac.partialPivLu().solve(-r);
        if (!step.allFinite())
            throw SolverFailure(SolverFailure::Reason::SingularJacobian,
                                "newton_solve: linear solve produced non-finite step", best_v,
                                it, best_norm);

        const double r2 = r.norm();
        double scale = 1.0;
        UnknownVector v_try;
        Eigen::VectorXd r_try;
        bool moved = false;
        while (true) {
            v_try = v + scale * step;
            r_try = residual(v_try, params, loading, truncation);
            if (r_try.allFinite() && r_try.norm() < r2) {
                moved = true;
                break;
            }
            if (scale <= options.min_step_fraction) {
                // Accept the guarded minimum step if it is at least finite;
                // otherwise stay put and let the iteration budget decide.
                moved = r_try.allFinite();
                break;
            }
            scale = std::max(scale * options.backtrack_factor, options.min_step_fraction);
        }
        if (moved) {
            v = std::move(v_try);
            r = std::move(r_try);
            norm_inf = r.lpNorm<Eigen::Infinity>();
            if (norm_inf < best_norm) {
                best_norm = norm_inf;
                best_v = v;
            }
        }
    }
    if (norm_inf < options.tolerance) return {v, options.max_iterations, norm_inf};
    throw SolverFailure(SolverFailure::Reason::MaxIterations,
                        "newton_solve: no convergence within iteration budget", best_v,
                        options.max_iterations, best_norm);
}

std::vector<double> ladder_schedule(double target_amplitude, const std::vector<double>& rungs) {
    std::vector<double> schedule;
    if (!rungs.empty() && target_amplitude > rungs.front()) {
        for (double r : rungs) {
            if (r < target_amplitude) schedule.push_back(r);
        }
    }
    schedule.push_back(target_amplitude);
    return schedule;
}

SpectralSolution ladder_solve(const ModelParams& params, const Loading& loading, int truncation,
                              const SolverOptions& options) {
    options.validate();
    const std::vector<double> schedule =
        ladder_schedule(loading.strain_amplitude(), options.ladder_rungs);

    const Loading first(schedule.front(), loading.angular_frequency());
    UnknownVector v = pack_solution(maos_initial_guess(params, first, truncation));
    for (double amplitude : schedule) {
        const Loading rung(amplitude, loading.angular_frequency());
        try {
            v = newton_solve(v, params, rung, truncation, options).unknowns;
        } catch (SolverFailure& failure) {
            std::ostringstream msg;
            msg << failure.what() << " (ladder rung gamma0=" << amplitude << ")";
            SolverFailure annotated(failure.reason, msg.str(), failure.best_iterate,
                                    failure.iterations, failure.residual_norm);
            annotated.failed_rung = amplitude;
            throw annotated;
        }
    }
    return unpack_solution(v, truncation, params, loading);
}

}  // namespace ghb
