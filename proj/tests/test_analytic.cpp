#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ghb/analytic.hpp"
#include "support/oracles.hpp"

using namespace ghb;

TEST_CASE("Maxwell linear moduli") {
    const LveModuli at1 = lve_moduli(1.0);
    CHECK(at1.storage == doctest::Approx(0.5));
    CHECK(at1.loss == doctest::Approx(0.5));

    const LveModuli at2 = lve_moduli(2.0);
    CHECK(at2.storage == doctest::Approx(0.8));
    CHECK(at2.loss == doctest::Approx(0.4));

    // Low-frequency limit: G' ~ De^2, G'' ~ De.
    const double de = 1e-6;
    const LveModuli low = lve_moduli(de);
    CHECK(low.storage == doctest::Approx(de * de).epsilon(1e-6));
    CHECK(low.loss == doctest::Approx(de).epsilon(1e-6));
}

TEST_CASE("intrinsic third-harmonic coefficients") {
    SUBCASE("UCM limit zeroes every third-order entry") {
        for (double de : {0.01, 0.5, 1.0, 20.0}) {
            const MaosIntrinsics in = maos_shear_intrinsics(0.0, de);
            CHECK(in.g31_prime == 0.0);
            CHECK(in.g31_dprime == 0.0);
            CHECK(in.g33_prime == 0.0);
            CHECK(in.g33_dprime == 0.0);
            CHECK(in.g11_prime > 0.0);
            CHECK(in.g11_dprime > 0.0);
        }
    }

    SUBCASE("frozen values at alpha=0.3, De=1") {
        const MaosIntrinsics in = maos_shear_intrinsics(0.3, 1.0);
        // 0.3 * (-70 + 13.2) / 160 and -0.3 * (10 + 2.4) / 160
        CHECK(in.g31_prime == doctest::Approx(-0.1065).epsilon(1e-12));
        CHECK(in.g31_dprime == doctest::Approx(-0.02325).epsilon(1e-12));
    }

    SUBCASE("direct re-evaluation across a De grid") {
        const double alpha = 0.45;
        for (double de : {0.02, 0.3, 1.7, 9.0, 80.0}) {
            const MaosIntrinsics in = maos_shear_intrinsics(alpha, de);
            const double de2 = de * de, de3 = de2 * de, de4 = de2 * de2, de6 = de4 * de2;
            const double p13 = std::pow(1.0 + de2, 3);
            const double p4 = 1.0 + 4.0 * de2;
            const double p9 = 1.0 + 9.0 * de2;
            CHECK(in.g31_prime ==
                  doctest::Approx(alpha * de4 *
                                  (-21.0 - 41.0 * de2 - 8.0 * de4 + 4 * alpha * (4.0 + 7.0 * de2)) /
                                  (4.0 * p13 * p4)).epsilon(1e-13));
            CHECK(in.g31_dprime ==
                  doctest::Approx(-alpha * de3 *
                                  (9.0 + 11.0 * de2 - 10.0 * de4 +
                                   2 * alpha * (-3.0 - de2 + 8.0 * de4)) /
                                  (4.0 * p13 * p4)).epsilon(1e-13));
            CHECK(in.g33_prime ==
                  doctest::Approx(alpha * de4 *
                                  (-21.0 + 30.0 * de + 51.0 * de4 +
                                   4 * alpha * (4.0 - 17.0 * de2 + 3.0 * de4)) /
                                  (4.0 * p13 * p4 * p9)).epsilon(1e-13));
            CHECK(in.g33_dprime ==
                  doctest::Approx(alpha * de3 *
                                  (-3.0 + 48.0 * de2 + 33.0 * de4 - 18.0 * de6 +
                                   alpha * (2.0 - 48.0 * de2 + 46.0 * de4)) /
                                  (4.0 * p13 * p4 * p9)).epsilon(1e-13));
        }
    }
}

TEST_CASE("step-strain relaxation modulus") {
    const ModelParams params(2.0, 0.5, 0.3);

    SUBCASE("t = 0 returns G") {
        CHECK(step_strain_modulus(params, 1.0, 0.0) == doctest::Approx(2.0));
        CHECK(step_strain_modulus(params, 8.0, 0.0) == doctest::Approx(2.0));
    }

    SUBCASE("small-strain limit is the Maxwell decay") {
        for (double t : {0.1, 0.5, 2.0, 5.0}) {
            const double g = step_strain_modulus(params, 1e-8, t);
            CHECK(g == doctest::Approx(2.0 * std::exp(-t / 0.5)).epsilon(1e-10));
        }
    }

    SUBCASE("long-time damping function h(gamma)") {
        const double gamma = 3.0;
        const double t = 30.0 * params.relaxation_time();
        const double ratio = step_strain_modulus(params, gamma, t) /
                             (params.modulus() * std::exp(-t / params.relaxation_time()));
        const double h = 1.0 / (1.0 + 0.3 * (1.0 - 0.3) * gamma * gamma);
        CHECK(ratio == doctest::Approx(h).epsilon(1e-8));
    }

    SUBCASE("monotone non-increasing in time") {
        for (double alpha : {0.1, 0.3, 0.6, 0.9}) {
            const ModelParams p(1.0, 1.0, alpha);
            for (double gamma : {0.1, 1.0, 5.0, 10.0}) {
                double prev = step_strain_modulus(p, gamma, 0.0);
                for (int i = 1; i <= 200; ++i) {
                    const double g = step_strain_modulus(p, gamma, 0.05 * i);
                    CHECK(g <= prev + 1e-14);
                    prev = g;
                }
            }
        }
    }

    SUBCASE("very large times do not overflow") {
        CHECK(std::isfinite(step_strain_modulus(params, 2.0, 1e6)));
    }
}

TEST_CASE("asymptotic initial guess") {
    const Loading loading(0.1, 1.0);

    SUBCASE("H below 2 is rejected") {
        CHECK_THROWS_AS(maos_initial_guess(ModelParams(1.0, 1.0, 0.3), loading, 1),
                        std::invalid_argument);
    }

    SUBCASE("UCM limit reproduces the closed-form coefficients") {
        const ModelParams ucm(1.0, 1.0, 0.0);
        const SpectralSolution guess = maos_initial_guess(ucm, loading, 5);
        const auto exact = oracles::ucm_closed_form(ucm, loading);
        CHECK(std::abs(guess.c()[0] - exact.c1) < 1e-14);
        CHECK(guess.a()[0].real() == doctest::Approx(exact.a0).epsilon(1e-12));
        CHECK(std::abs(guess.a()[1] - exact.a2) < 1e-14);
        for (std::size_t k = 1; k < 5; ++k) CHECK(std::abs(guess.c()[k]) == 0.0);
        for (std::size_t k = 0; k < 5; ++k) CHECK(std::abs(guess.b()[k]) == 0.0);
    }

    SUBCASE("third-harmonic magnitude follows the intrinsic coefficients") {
        const ModelParams params(1.0, 1.0, 0.3);
        const SpectralSolution guess = maos_initial_guess(params, loading, 5);
        const MaosIntrinsics in = maos_shear_intrinsics(0.3, 1.0);
        const double g0 = loading.strain_amplitude();
        const double expected = 0.5 * g0 * g0 * g0 *
                                std::hypot(in.g33_prime, in.g33_dprime) * params.modulus();
        CHECK(std::abs(guess.c()[1]) == doctest::Approx(expected).epsilon(1e-12));
    }

    SUBCASE("every coefficient above the third harmonic is exactly zero") {
        const ModelParams params(1.0, 2.0, 0.45);
        const SpectralSolution guess = maos_initial_guess(params, Loading(0.05, 3.0), 8);
        for (std::size_t k = 2; k < 8; ++k) {
            CHECK(std::abs(guess.a()[k]) == 0.0);  // harmonics 4, 6, ...
            CHECK(std::abs(guess.c()[k]) == 0.0);  // harmonics 5, 7, ...
        }
        CHECK(std::abs(guess.b()[0]) == 0.0);
    }
}
