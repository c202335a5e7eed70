#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <random>

#include "ghb/ivp.hpp"
#include "support/oracles.hpp"

using namespace ghb;

TEST_CASE("integrator options validation") {
    IntegratorOptions opts;
    CHECK_NOTHROW(opts.validate());
    opts.resample_count = 999;
    CHECK_THROWS_AS(opts.validate(), std::invalid_argument);
    opts.resample_count = 1000;
    opts.relative_tolerance = 0.0;
    CHECK_THROWS_AS(opts.validate(), std::invalid_argument);
}

TEST_CASE("UCM alternance amplitude matches the closed form") {
    const ModelParams ucm(1.0, 1.0, 0.0);
    const Loading loading(1.0, 1.0);  // De = 1
    const Trajectory traj = integrate_cycles(ucm, loading);
    const auto settled = detect_alternance(traj, 1e-6);
    REQUIRE(settled.has_value());
    // sigma12_tilde amplitude = 1 / sqrt(1 + De^2)
    const double expected = 1.0 / std::sqrt(2.0);
    CHECK(traj.cycle_peaks.back() == doctest::Approx(expected).epsilon(1e-5));
}

TEST_CASE("vanishing-amplitude response recovers the linear moduli") {
    const ModelParams params(1.0, 1.0, 0.3);
    const Loading loading(1e-4, 1.0);
    const IvpSolution sol = solve_ivp(params, loading);
    // Dimensionless leading coefficient of sigma12 is 1 / (2 (1 + i De))
    // independent of alpha in the linear limit.
    const Complex expected = 1.0 / (2.0 * Complex{1.0, 1.0});
    REQUIRE(sol.extraction.coeffs.s12.size() >= 2);
    CHECK(std::abs(sol.extraction.coeffs.s12[1] - expected) < 1e-3 * std::abs(expected));
}

TEST_CASE("alternance detection on synthetic peak records") {
    Trajectory traj;
    traj.cycle_period = 1.0;

    SUBCASE("constant peaks settle immediately") {
        traj.cycle_peaks = {1.0, 1.0, 1.0};
        CHECK(detect_alternance(traj, 1e-6) == 1);
    }

    SUBCASE("worked sequence lands on cycle 5") {
        traj.cycle_peaks = {2.0, 1.1, 1.01, 1.001, 1.0000009, 1.0000008};
        CHECK(detect_alternance(traj, 1e-6) == 5);
    }

    SUBCASE("never-settling peaks report no alternance") {
        traj.cycle_peaks = {1.0, 2.0, 4.0, 8.0, 16.0};
        CHECK_FALSE(detect_alternance(traj, 1e-6).has_value());
    }

    SUBCASE("fewer than two cycles cannot settle") {
        traj.cycle_peaks = {1.0};
        CHECK_FALSE(detect_alternance(traj, 1e-6).has_value());
    }
}

TEST_CASE("too small a cycle budget raises NotReached") {
    const ModelParams params(1.0, 1.0, 0.3);
    IntegratorOptions opts;
    opts.max_cycles = 1;
    CHECK_THROWS_AS(solve_ivp(params, Loading(10.0, 1.0), opts), IntegrationFailure);
    try {
        solve_ivp(params, Loading(10.0, 1.0), opts);
    } catch (const IntegrationFailure& failure) {
        CHECK(failure.reason == IntegrationFailure::Reason::AlternanceNotReached);
    }
}

TEST_CASE("period resampling") {
    const double period = 2.0 * std::numbers::pi;

    SUBCASE("nodes on the target grid pass through unchanged") {
        const int count = 50;
        Trajectory traj;
        traj.cycle_period = period;
        for (int i = 0; i <= count; ++i) {
            const double t = static_cast<double>(i) * period / count;
            traj.times.push_back(t);
            traj.s11.push_back(std::cos(t) + 2.0);
            traj.s22.push_back(-0.5 * std::cos(t));
            traj.s12.push_back(std::sin(t));
        }
        const Waveform wf = resample_period(traj, count);
        for (int i = 0; i < count; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            CHECK(wf.s11[ui] == doctest::Approx(traj.s11[ui]).epsilon(1e-13));
            CHECK(wf.s12[ui] == doctest::Approx(traj.s12[ui]).epsilon(1e-13));
        }
    }

    SUBCASE("non-uniformly sampled sinusoid interpolates to 1e-6") {
        std::mt19937 rng(19);
        std::uniform_real_distribution<double> jitter(0.7, 1.3);
        Trajectory traj;
        traj.cycle_period = period;
        const int per_period = 100;
        double t = 0.0;
        while (t < period) {
            traj.times.push_back(t);
            traj.s11.push_back(std::sin(t));
            traj.s22.push_back(std::sin(t));
            traj.s12.push_back(std::sin(t));
            t += jitter(rng) * period / per_period;
        }
        traj.times.push_back(period);
        traj.s11.push_back(std::sin(period));
        traj.s22.push_back(std::sin(period));
        traj.s12.push_back(std::sin(period));

        const Waveform wf = resample_period(traj, 1000);
        double worst = 0.0;
        for (int i = 0; i < 1000; ++i) {
            const auto ui = static_cast<std::size_t>(i);
            worst = std::max(worst, std::abs(wf.s12[ui] - std::sin(wf.times[ui])));
        }
        CHECK(worst < 1e-6);
    }

    SUBCASE("constant channel stays constant") {
        Trajectory traj;
        traj.cycle_period = period;
        for (int i = 0; i <= 37; ++i) {
            traj.times.push_back(static_cast<double>(i) * period / 37.0);
            traj.s11.push_back(4.25);
            traj.s22.push_back(4.25);
            traj.s12.push_back(4.25);
        }
        const Waveform wf = resample_period(traj, 200);
        for (double v : wf.s12) CHECK(v == doctest::Approx(4.25).epsilon(1e-13));
    }

    SUBCASE("trajectory shorter than one period is rejected") {
        Trajectory traj;
        traj.cycle_period = period;
        traj.times = {0.0, 0.5 * period};
        traj.s11 = {0.0, 0.0};
        traj.s22 = {0.0, 0.0};
        traj.s12 = {0.0, 0.0};
        traj.times.back() = 0.5 * period;
        CHECK_THROWS_AS(resample_period(traj, 100), IntegrationFailure);
    }
}

TEST_CASE("Fourier extraction") {
    const int count = 1000;

    SUBCASE("pure odd sinusoid produces a single pair") {
        Waveform wf;
        wf.dimensionless = true;
        for (int i = 0; i < count; ++i) {
            const double theta = 2.0 * std::numbers::pi * i / count;
            wf.times.push_back(theta);
            wf.s12.push_back(std::sin(theta));
            wf.s11.push_back(1.0 + 0.5 * std::cos(2.0 * theta));
            wf.s22.push_back(-0.25);
        }
        const FourierExtraction ex = fourier_from_waveform(wf);
        REQUIRE(ex.coeffs.s12.size() >= 2);
        CHECK(std::abs(ex.coeffs.s12[1] - Complex{0.0, -0.5}) < 1e-12);
        for (std::size_t n = 2; n < ex.coeffs.s12.size(); ++n)
            CHECK(std::abs(ex.coeffs.s12[n]) < 1e-12);
        CHECK(ex.leakage_s12 < 1e-12);
        CHECK(std::abs(ex.coeffs.s11[0] - Complex{1.0, 0.0}) < 1e-12);
        CHECK(std::abs(ex.coeffs.s11[2] - Complex{0.25, 0.0}) < 1e-12);
        CHECK(std::abs(ex.coeffs.s22[0] - Complex{-0.25, 0.0}) < 1e-12);
    }

    SUBCASE("forbidden-parity content is reported as leakage") {
        Waveform wf;
        wf.dimensionless = true;
        for (int i = 0; i < count; ++i) {
            const double theta = 2.0 * std::numbers::pi * i / count;
            wf.times.push_back(theta);
            wf.s12.push_back(std::sin(theta) + 1e-4 * std::cos(2.0 * theta));
            wf.s11.push_back(std::cos(2.0 * theta));
            wf.s22.push_back(std::cos(2.0 * theta));
        }
        const FourierExtraction ex = fourier_from_waveform(wf);
        // cos(2 theta) of amplitude 1e-4 puts |c2| = 5e-5 against |c1| = 0.5.
        CHECK(ex.leakage_s12 == doctest::Approx(5e-5 / 0.5).epsilon(1e-6));
    }
}

TEST_CASE("self-convergence under tolerance tightening") {
    const ModelParams params(1.0, 1.0, 0.3);
    const Loading loading(1.0, 1.0);
    IntegratorOptions loose;   // defaults: rtol 1e-6
    IntegratorOptions tight;
    tight.relative_tolerance = 1e-7;
    tight.absolute_tolerance = 1e-10;

    const IvpSolution a = solve_ivp(params, loading, loose);
    const IvpSolution b = solve_ivp(params, loading, tight);
    const auto common = std::min(a.extraction.coeffs.s12.size(), b.extraction.coeffs.s12.size());
    for (std::size_t n = 0; n < common; ++n) {
        CHECK(std::abs(a.extraction.coeffs.s12[n] - b.extraction.coeffs.s12[n]) <
              5.0 * loose.relative_tolerance);
    }
}

TEST_CASE("parity leakage stays below 1e-6 at alternance") {
    const ModelParams params(1.0, 1.0, 0.3);
    for (const auto& [g0, w] : std::vector<std::pair<double, double>>{
             {0.1, 1.0}, {1.0, 1.0}, {10.0, 1.0}, {10.0, 0.1}, {0.1, 10.0}}) {
        const IvpSolution sol = solve_ivp(params, Loading(g0, w));
        CHECK(sol.extraction.max_leakage() < 1e-6);
    }
}

TEST_CASE("transient length versus amplitude (report only)") {
    const ModelParams params(1.0, 1.0, 0.3);
    int prev = 0;
    bool monotone = true;
    for (double g0 : {0.1, 1.0, 10.0}) {
        const IvpSolution sol = solve_ivp(params, Loading(g0, 1.0));
        if (sol.cycles_used < prev) monotone = false;
        prev = sol.cycles_used;
        MESSAGE("gamma0=", g0, " cycles_used=", sol.cycles_used);
    }
    if (!monotone) MESSAGE("cycles_used is not monotone in gamma0 on this grid");
}
