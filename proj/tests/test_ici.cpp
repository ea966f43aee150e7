#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mralloc/ici.hpp"
#include "mralloc/rng.hpp"
#include "mralloc/scenario.hpp"

using namespace mralloc;

namespace {
const SystemParams kParams;
const double kSymbol = kParams.symbol_s();  // 102.4 us

double edge_doppler() {
    return derive_trajectory(kParams).periods.back().doppler_hz;
}
}  // namespace

TEST_CASE("coefficient sum: time-invariant channel") {
    // f_D = 0: orthogonal subcarriers, all power on the diagonal
    for (int k : {1, 2, 7, 100, 511}) {
        CHECK(std::abs(ici_coeff_sum(k, 0.0, kSymbol, 512)) < 1e-13);
    }
    CHECK(ici_coeff_sum(0, 0.0, kSymbol, 512) == Catch::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(ici_coeff_sum(512, 0.0, kSymbol, 512), std::invalid_argument);
}

TEST_CASE("closed form equals the literal sum") {
    // identity fuzz over N, f_D T and k; tolerance 1e-10 relative with
    // a 1e-13 absolute floor: the literal sum's accumulated roundoff
    // (measured worst 1.4e-14 over the acceptance grid)
    RngStream rng(17);
    for (int n : {8, 64, 512}) {
        const double symbol = n / kParams.bandwidth_hz;
        for (int rep = 0; rep < 40; ++rep) {
            const double x = 0.4 * rng.u01();
            const double fd = x / symbol;
            const int k = static_cast<int>(rng.u01() * (2 * n - 1)) - (n - 1);
            const double s = ici_coeff_sum(k, fd, symbol, n);
            const double e = ici_coeff_exact(k, fd, symbol, n);
            REQUIRE(std::abs(s - e) <=
                    1e-10 * std::max(std::abs(s), std::abs(e)) + 1e-13);
        }
    }
}

TEST_CASE("closed form: diagonal and cross-module consistency") {
    CHECK(ici_coeff_exact(0, 0.0, kSymbol, 512) == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(ici_coeff_exact(0, 1e-6, kSymbol, 512) == Catch::Approx(1.0).epsilon(1e-9));

    // k = 0 reproduces the mean diagonal gain
    const double fd = 0.1 / kSymbol;
    CHECK(ici_coeff_exact(0, fd, kSymbol, 512) ==
          Catch::Approx(mr_diag_gain_mean(fd, kSymbol, 512)).epsilon(1e-12));
}

TEST_CASE("total channel power is conserved across the DFT") {
    RngStream rng(23);
    for (int n : {8, 64, 512}) {
        const double symbol = n / kParams.bandwidth_hz;
        for (double x : {0.0, 0.1003, 0.37}) {
            const double fd = x / symbol;
            for (int p : {0, n / 3, n - 1}) {
                double total = 0.0;
                for (int sub = 0; sub < n; ++sub) {
                    total += ici_coeff_exact(sub - p, fd, symbol, n);
                }
                REQUIRE(total == Catch::Approx(1.0).epsilon(1e-8));
            }
        }
    }
    (void)rng;
}

TEST_CASE("approximation: structure and limits") {
    CHECK(ici_coeff_approx(1, 0.0, kSymbol, 512) == 0.0);
    CHECK(ici_coeff_approx(250, 0.0, kSymbol, 512) == 0.0);
    CHECK_THROWS_AS(ici_coeff_approx(0, 100.0, kSymbol, 512), std::invalid_argument);
    CHECK_THROWS_AS(ici_coeff_approx(1, 0.21 / kSymbol, kSymbol, 512),
                    std::domain_error);

    // ratio between k = 5 and k = 1 is sin^2(pi/N)/sin^2(5pi/N) ~ 1/25
    const double fd = edge_doppler();
    const double r = ici_coeff_approx(5, fd, kSymbol, 512) /
                     ici_coeff_approx(1, fd, kSymbol, 512);
    const double s1 = std::sin(pi / 512), s5 = std::sin(5 * pi / 512);
    CHECK(r == Catch::Approx((s1 * s1) / (s5 * s5)).epsilon(1e-12));
    CHECK(r == Catch::Approx(1.0 / 25.0).epsilon(0.01));

    // monotone decreasing in |k| on [1, N/2]
    double prev = ici_coeff_approx(1, fd, kSymbol, 512);
    for (int k = 2; k <= 256; ++k) {
        const double v = ici_coeff_approx(k, fd, kSymbol, 512);
        REQUIRE(v < prev);
        prev = v;
    }
}

TEST_CASE("approximation error at the edge Doppler (measured)") {
    // At f_D T ~ 0.1003 the k = 1 relative error of the small-Doppler
    // form is -3x^2 + O(x^4) ~ -3.0%, shrinking like 1/k^2; the values
    // below freeze the measured curve.
    const double fd = edge_doppler();
    const double x = fd * kSymbol;
    CHECK(x == Catch::Approx(0.1003319).epsilon(1e-5));

    const double err1 = ici_coeff_approx(1, fd, kSymbol, 512) /
                            ici_coeff_exact(1, fd, kSymbol, 512) - 1.0;
    CHECK(err1 == Catch::Approx(-0.0297978).margin(2e-5));
    const double err2 = ici_coeff_approx(2, fd, kSymbol, 512) /
                            ici_coeff_exact(2, fd, kSymbol, 512) - 1.0;
    CHECK(err2 == Catch::Approx(-0.0075242).margin(2e-5));
    for (int k = 2; k <= 10; ++k) {
        const double err = std::abs(ici_coeff_approx(k, fd, kSymbol, 512) /
                                        ici_coeff_exact(k, fd, kSymbol, 512) - 1.0);
        CHECK(err < 0.01);  // within 1% for every k >= 2
    }
}

TEST_CASE("window-5 tail mass at the edge Doppler (measured)") {
    // Fraction of off-diagonal coupling power outside |k| <= 5.
    const double fd = edge_doppler();
    double window = 0.0;
    for (int k = 1; k <= 5; ++k) {
        window += 2.0 * ici_coeff_exact(k, fd, kSymbol, 512);
    }
    const double off_diag = 1.0 - ici_coeff_exact(0, fd, kSymbol, 512);
    const double tail_ratio = (off_diag - window) / off_diag;
    CHECK(tail_ratio == Catch::Approx(0.10804).margin(5e-4));
}

TEST_CASE("window sum") {
    double manual = 0.0;
    for (int k = 1; k <= 5; ++k) {
        const double s = std::sin(pi * k / 512);
        manual += 2.0 / (s * s);
    }
    CHECK(ici_window_sum(5, 512) == Catch::Approx(manual).epsilon(1e-14));
    CHECK(ici_window_sum(6, 512) > ici_window_sum(5, 512));
    CHECK_THROWS_AS(ici_window_sum(0, 512), std::invalid_argument);
    CHECK_THROWS_AS(ici_window_sum(256, 512), std::invalid_argument);
}

TEST_CASE("coefficient table is symmetric and nonnegative") {
    const IciSpec exact_spec{5, false};
    const IciSpec approx_spec{5, true};
    const double fd = edge_doppler();
    for (const auto& spec : {exact_spec, approx_spec}) {
        const auto table = ici_coeff_table(spec, fd, kSymbol, 512);
        REQUIRE(table.size() == 11);
        for (const auto& [k, v] : table) {
            CHECK(v >= 0.0);
            CHECK(v == table.at(-k));
        }
        CHECK(table.at(0) ==
              Catch::Approx(mr_diag_gain_mean(fd, kSymbol, 512)).epsilon(1e-12));
    }
}

TEST_CASE("aggregate ICI factor per period") {
    const Trajectory traj = derive_trajectory(kParams);
    const IciSpec spec;

    // no Doppler at closest approach -> no ICI
    const IciPower at0 = gamma_ici0(traj.at(0), 0.5, kParams, spec);
    CHECK(at0.gamma_ici0 == 0.0);
    CHECK(at0.p_ici_watts == 0.0);

    // symmetric periods carry identical factors
    for (int i : {3, 17, 49}) {
        CHECK(gamma_ici0(traj.at(i), 0.5, kParams, spec).gamma_ici0 ==
              gamma_ici0(traj.at(-i), 0.5, kParams, spec).gamma_ici0);
    }

    // cell-edge value (reference: 40-digit arithmetic)
    const IciPower edge = gamma_ici0(traj.at(49), 1.0, kParams, spec);
    CHECK(edge.gamma_ici0 > 0.0);
    CHECK(edge.gamma_ici0 == Catch::Approx(7.212144435133387e-4).epsilon(1e-10));
    CHECK(edge.p_ici_watts ==
          Catch::Approx(edge.gamma_ici0 * kParams.noise_power_w()).epsilon(1e-12));

    // the Doppler factor sin^2(pi f_D T) grows strictly with |i|; the
    // full gamma_ici0 does not (path loss eventually wins), which the
    // last check documents
    double prev = -1.0;
    for (int i = 0; i <= 49; ++i) {
        const double x = traj.at(i).doppler_hz * kParams.symbol_s();
        const double s = std::sin(pi * x);
        REQUIRE(s * s > prev);
        prev = s * s;
    }
    CHECK(gamma_ici0(traj.at(8), 1.0, kParams, spec).gamma_ici0 >
          gamma_ici0(traj.at(49), 1.0, kParams, spec).gamma_ici0);

    // window wider than the MR band
    CHECK_THROWS_AS(gamma_ici0(traj.at(49), 5.0 / 512, kParams, IciSpec{6, false}),
                    std::invalid_argument);
    CHECK_THROWS_AS(gamma_ici0(traj.at(49), 0.0, kParams, spec),
                    std::invalid_argument);
}

TEST_CASE("cross-band diagnostic term") {
    const Trajectory traj = derive_trajectory(kParams);
    const IciSpec spec;
    const double in_band = gamma_ici0(traj.at(49), 0.5, kParams, spec).gamma_ici0;
    const double cross = gamma_ici_cross(traj.at(49), 0.5, 0.5, kParams, spec);
    CHECK(cross > 0.0);
    // one-sided window at equal per-subcarrier power: half the in-band sum
    CHECK(cross == Catch::Approx(0.5 * in_band).epsilon(1e-12));
    CHECK(gamma_ici_cross(traj.at(0), 0.5, 0.5, kParams, spec) == 0.0);
    CHECK_THROWS_AS(gamma_ici_cross(traj.at(49), 0.5, 1.0, kParams, spec),
                    std::invalid_argument);
}
