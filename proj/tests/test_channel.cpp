#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

#include "mralloc/channel.hpp"
#include "mralloc/params.hpp"

using namespace mralloc;

TEST_CASE("profile normalization") {
    const DelayProfile table2 = default_delay_profile();
    const double raw_sum = table2.total_power();  // 1.578
    CHECK(raw_sum == Catch::Approx(1.578).epsilon(1e-12));

    const DelayProfile norm = normalize_profile(table2);
    CHECK(norm.total_power() == Catch::Approx(1.0).epsilon(1e-12));
    for (std::size_t i = 0; i < norm.taps.size(); ++i) {
        CHECK(norm.taps[i].power ==
              Catch::Approx(table2.taps[i].power / raw_sum).epsilon(1e-12));
        CHECK(norm.taps[i].delay_s == table2.taps[i].delay_s);
    }

    // idempotent
    const DelayProfile twice = normalize_profile(norm);
    for (std::size_t i = 0; i < norm.taps.size(); ++i) {
        CHECK(twice.taps[i].power == Catch::Approx(norm.taps[i].power).epsilon(1e-14));
    }

    CHECK(normalize_profile({{{0.0, 5.0}}, 1e-6}).taps[0].power == 1.0);
    const DelayProfile two{{{0.0, 0.3}, {1e-6, 0.3}}, 1e-6};
    CHECK(normalize_profile(two).taps[0].power == Catch::Approx(0.5));

    CHECK_THROWS_AS(normalize_profile({{}, 1e-6}), std::invalid_argument);
    CHECK_THROWS_AS(normalize_profile({{{0.0, 0.0}}, 1e-6}), std::invalid_argument);
    CHECK_THROWS_AS(normalize_profile({{{1e-6, 1.0}, {0.0, 1.0}}, 1e-6}),
                    std::invalid_argument);
}

TEST_CASE("two-path time autocorrelation") {
    CHECK(time_autocorr(1234.0, 0.0) == 1.0);
    CHECK(time_autocorr(0.0, 0.123) == 1.0);
    CHECK(time_autocorr(1000.0, 0.25e-3) == Catch::Approx(0.0).margin(1e-12));
    CHECK(time_autocorr(1000.0, 0.5e-3) == Catch::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("cross covariance") {
    CHECK(cross_covariance(1e-6, 0.0, 0.0, 0.0) == std::complex<double>(1.0, 0.0));

    // sigma = 1 us, df = B/N = 9765.625 Hz, no Doppler
    const auto v = cross_covariance(1e-6, 5e6 / 512, 0.0, 0.0);
    CHECK(v.real() == Catch::Approx(0.9962491664285413).epsilon(1e-10));
    CHECK(v.imag() == Catch::Approx(0.0611290832499387).epsilon(1e-10));

    // cosine zero: f_D dt = 1/4 cycle
    const auto z = cross_covariance(1e-6, 3137.0, 0.25e-3, 1000.0);
    CHECK(std::abs(z) == Catch::Approx(0.0).margin(1e-12));

    CHECK_THROWS_AS(cross_covariance(0.0, 1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("cross covariance modulus never exceeds 1") {
    RngStream rng(11);
    for (int i = 0; i < 500; ++i) {
        const double df = (rng.u01() - 0.5) * 2e6;
        const double dt = (rng.u01() - 0.5) * 1e-2;
        const double fd = rng.u01() * 2e3;
        CHECK(std::abs(cross_covariance(1e-6, df, dt, fd)) <= 1.0 + 1e-12);
    }
}

TEST_CASE("mean diagonal gain under Doppler") {
    CHECK(mr_diag_gain_mean(0.0, 1.024e-4, 512) == 1.0);

    // f_D T = 0.1, N = 512 (reference value, 40-digit arithmetic)
    const double fd = 0.1 / 1.024e-4;
    CHECK(mr_diag_gain_mean(fd, 1.024e-4, 512) ==
          Catch::Approx(0.967531330698813).epsilon(1e-12));

    // N -> large converges to (sin(0.1 pi)/(0.1 pi))^2
    CHECK(mr_diag_gain_mean(fd, 1.024e-4, 1 << 15) ==
          Catch::Approx(0.967531209275079).epsilon(1e-8));

    // continuous at 0, monotone decreasing in f_D T on (0, 0.5)
    CHECK(mr_diag_gain_mean(1e-9, 1.024e-4, 512) == Catch::Approx(1.0).epsilon(1e-12));
    double prev = 1.0;
    for (double x = 0.01; x < 0.5; x += 0.01) {
        const double g = mr_diag_gain_mean(x / 1.024e-4, 1.024e-4, 512);
        CHECK(g < prev);
        prev = g;
    }

    CHECK_THROWS_AS(mr_diag_gain_mean(0.5 / 1.024e-4, 1.024e-4, 512),
                    std::domain_error);
}

TEST_CASE("fading laws: cdf, quantile, sampling") {
    const FadingLaw exp1 = FadingLaw::exponential(1.0);
    const FadingLaw max50 = FadingLaw::max_of(50);
    CHECK(cdf_gain(exp1, 0.0) == 0.0);
    CHECK(cdf_gain(max50, std::log(2.0)) ==
          Catch::Approx(std::pow(0.5, 50)).epsilon(1e-10));
    CHECK_THROWS_AS(cdf_gain(exp1, -1.0), std::invalid_argument);

    // max-of-1 degenerates to the unit exponential
    const FadingLaw max1 = FadingLaw::max_of(1);
    for (double x : {0.0, 0.1, 0.5, 1.0, 3.0, 10.0}) {
        CHECK(cdf_gain(max1, x) == Catch::Approx(cdf_gain(exp1, x)).epsilon(1e-12));
    }
    CHECK(mean_gain(max1) == mean_gain(exp1));
    CHECK(mean_gain(max50) == Catch::Approx(4.499205338329425).epsilon(1e-12));

    // quantile inverts the cdf
    for (double u : {0.01, 0.25, 0.5, 0.9, 0.999}) {
        CHECK(cdf_gain(max50, quantile_gain(max50, u)) == Catch::Approx(u).epsilon(1e-9));
        CHECK(cdf_gain(exp1, quantile_gain(exp1, u)) == Catch::Approx(u).epsilon(1e-9));
    }
}

TEST_CASE("empirical cdf of sample_gain converges to cdf_gain") {
    const int n = 100000;
    for (const FadingLaw& law :
         {FadingLaw::exponential(1.0), FadingLaw::max_of(50)}) {
        RngStream rng(5);
        std::vector<double> xs(n);
        for (auto& x : xs) x = sample_gain(law, rng);
        std::sort(xs.begin(), xs.end());
        double ks = 0.0;
        for (int i = 0; i < n; ++i) {
            const double f = cdf_gain(law, xs[i]);
            ks = std::max(ks, std::abs(f - (i + 1.0) / n));
            ks = std::max(ks, std::abs(f - static_cast<double>(i) / n));
        }
        CHECK(ks < 0.01);
    }
}
