#include "ghb/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace ghb {

LveModuli lve_moduli(double deborah) {
    if (!(deborah > 0.0)) throw std::invalid_argument("lve_moduli: De must be > 0");
    const double de2 = deborah * deborah;
    return {de2 / (1.0 + de2), deborah / (1.0 + de2)};
}

MaosIntrinsics maos_shear_intrinsics(double anisotropy, double deborah) {
    if (!(anisotropy >= 0.0 && anisotropy < 1.0))
        throw std::invalid_argument("maos_shear_intrinsics: need 0 <= alpha < 1");
    if (!(deborah > 0.0)) throw std::invalid_argument("maos_shear_intrinsics: De must be > 0");

    const double a = anisotropy;
    const double de = deborah;
    const double de2 = de * de;
    const double de3 = de2 * de;
    const double de4 = de2 * de2;
    const double de6 = de4 * de2;
    const double p1 = 1.0 + de2;
    const double p13 = p1 * p1 * p1;
    const double p4 = 1.0 + 4.0 * de2;
    const double p9 = 1.0 + 9.0 * de2;

    MaosIntrinsics out;
    const LveModuli lin = lve_moduli(de);
    out.g11_prime = lin.storage;
    out.g11_dprime = lin.loss;

    out.g31_prime = a * de4 * (-21.0 - 41.0 * de2 - 8.0 * de4 + 4.0 * a * (4.0 + 7.0 * de2)) /
                    (4.0 * p13 * p4);
    out.g31_dprime = -a * de3 *
                     (9.0 + 11.0 * de2 - 10.0 * de4 + 2.0 * a * (-3.0 - de2 + 8.0 * de4)) /
                     (4.0 * p13 * p4);
    out.g33_prime = a * de4 *
                    (-21.0 + 30.0 * de + 51.0 * de4 + 4.0 * a * (4.0 - 17.0 * de2 + 3.0 * de4)) /
                    (4.0 * p13 * p4 * p9);
    out.g33_dprime = a * de3 *
                     (-3.0 + 48.0 * de2 + 33.0 * de4 - 18.0 * de6 +
                      a * (2.0 - 48.0 * de2 + 46.0 * de4)) /
                     (4.0 * p13 * p4 * p9);
    return out;
}

double step_strain_modulus(const ModelParams& params, double strain, double t) {
    if (!(strain > 0.0)) throw std::invalid_argument("step_strain_modulus: gamma must be > 0");
    if (!(t >= 0.0)) throw std::invalid_argument("step_strain_modulus: t must be >= 0");

    const double a = params.anisotropy();
    const double g2 = strain * strain;
    const double x = t / params.relaxation_time();
    const double ex = std::exp(-x);
    // (1 - cosh x) e^{-x} written without the overflowing cosh.
    const double cosh_term = ex - 0.5 * (1.0 + ex * ex);
    const double denom = 1.0 + 2.0 * a * a * g2 * cosh_term + a * g2 * (1.0 - ex);
    return params.modulus() * ex / denom;
}

SpectralSolution maos_initial_guess(const ModelParams& params, const Loading& loading,
                                    int truncation) {
    if (truncation < 2)
        throw std::invalid_argument("maos_initial_guess: H must be >= 2 to hold the third harmonic");

    const double g = params.modulus();
    const double g0 = loading.strain_amplitude();
    const auto [de, wi] = derived_groups(params, loading);
    (void)wi;

    const MaosIntrinsics in3 = maos_shear_intrinsics(params.anisotropy(), de);
    const double g03 = g0 * g0 * g0;

    // Sine/cosine shear coefficients through third order in gamma0.
    const double shear1_sin = g * (g0 * in3.g11_prime + g03 * in3.g31_prime);
    const double shear1_cos = g * (g0 * in3.g11_dprime + g03 * in3.g31_dprime);
    const double shear3_sin = g * g03 * in3.g33_prime;
    const double shear3_cos = g * g03 * in3.g33_dprime;

    // N1 through second order, expressed with the linear moduli.
    const LveModuli lw = lve_moduli(de);
    const LveModuli l2w = lve_moduli(2.0 * de);
    const double f0_cos = g * lw.storage;
    const double f2_sin = g * (lw.loss - 0.5 * l2w.loss);
    const double f2_cos = g * (-lw.storage + 0.5 * l2w.storage);
    const double g02 = g0 * g0;

    const auto h = static_cast<std::size_t>(truncation);
    std::vector<Complex> a(h, Complex{0.0, 0.0});
    std::vector<Complex> b(h, Complex{0.0, 0.0});
    std::vector<Complex> c(h, Complex{0.0, 0.0});

    // cos/sin harmonics map to complex coefficients via
    // x_n = 2 Re X_n cos(nwt) - 2 Im X_n sin(nwt).
    c[0] = Complex{0.5 * shear1_cos, -0.5 * shear1_sin};
    c[1] = Complex{0.5 * shear3_cos, -0.5 * shear3_sin};
    a[0] = Complex{g02 * f0_cos, 0.0};
    a[1] = Complex{0.5 * g02 * f2_cos, -0.5 * g02 * f2_sin};

    return SpectralSolution(truncation, std::move(a), std::move(b), std::move(c), params, loading);
}

}  // namespace ghb
