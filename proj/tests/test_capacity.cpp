#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "mralloc/capacity.hpp"
#include "mralloc/rng.hpp"
#include "mralloc/scenario.hpp"

using namespace mralloc;

namespace {

const CapacityModel& table_model() {
    static const CapacityModel model(SystemParams{}, default_population(), {});
    return model;
}

CapacityOptions method_options(ErgodicMethod m) {
    CapacityOptions opt;
    opt.method = m;
    return opt;
}

}  // namespace

TEST_CASE("ergodic capacity: trivial and reference values") {
    const FadingLaw exp1 = FadingLaw::exponential(1.0);
    CHECK(ergodic_log_capacity(0.0, exp1) == 0.0);
    CHECK(ergodic_log_capacity_closed(0.0, exp1) == 0.0);
    CHECK_THROWS_AS(ergodic_log_capacity(-1.0, exp1), std::invalid_argument);

    // gamma = 1: e E1(1) / ln 2 (reference: 40-digit arithmetic)
    const double ref = 0.8603473822708859;
    CHECK(ergodic_log_capacity(1.0, exp1) == Catch::Approx(ref).epsilon(1e-9));
    CHECK(ergodic_log_capacity_closed(1.0, exp1) == Catch::Approx(ref).epsilon(1e-13));
}

TEST_CASE("ergodic capacity: max-of-1 degenerates to the exponential") {
    const FadingLaw exp1 = FadingLaw::exponential(1.0);
    const FadingLaw max1 = FadingLaw::max_of(1);
    for (double g : {1e-6, 0.01, 1.0, 100.0, 1e6}) {
        CHECK(ergodic_log_capacity(g, max1) ==
              Catch::Approx(ergodic_log_capacity(g, exp1)).epsilon(1e-8));
        CHECK(ergodic_log_capacity_closed(g, max1) ==
              Catch::Approx(ergodic_log_capacity_closed(g, exp1)).epsilon(1e-12));
    }
}

TEST_CASE("ergodic capacity: quadrature, closed form and sampling agree") {
    RngStream rng(29);
    for (const FadingLaw& law :
         {FadingLaw::exponential(1.0), FadingLaw::max_of(50)}) {
        for (double g : {0.0253, 1.0, 3164.6}) {
            const double quad = ergodic_log_capacity(g, law);
            const double closed = ergodic_log_capacity_closed(g, law);
            CHECK(closed == Catch::Approx(quad).epsilon(5e-3));

            double acc = 0.0;
            const int n = 200000;
            for (int i = 0; i < n; ++i) acc += std::log1p(g * sample_gain(law, rng));
            acc /= n * log_base_scale();
            CHECK(acc == Catch::Approx(quad).epsilon(5e-3));
        }
    }
    CHECK_THROWS_AS(ergodic_log_capacity_closed(1.0, FadingLaw::max_of(121)),
                    std::invalid_argument);
}

TEST_CASE("cached table tracks the quadrature evaluator") {
    const CapacityModel& table = table_model();
    const CapacityModel quad(SystemParams{}, default_population(),
                             method_options(ErgodicMethod::quadrature));
    RngStream rng(31);
    for (int i = 0; i < 60; ++i) {
        const double g = std::exp(-20.7 + 41.4 * rng.u01());
        CHECK(table.eval_mr(g) == Catch::Approx(quad.eval_mr(g)).epsilon(1e-7));
        CHECK(table.eval_user(g) == Catch::Approx(quad.eval_user(g)).epsilon(1e-7));
    }
    // beyond the tabulated range the asymptotes take over
    CHECK(table.eval_mr(1e-14) == Catch::Approx(quad.eval_mr(1e-14)).epsilon(1e-6));
    CHECK(table.eval_mr(1e12) == Catch::Approx(quad.eval_mr(1e12)).epsilon(1e-6));
}

TEST_CASE("statistical sum capacity of the local users") {
    // reference value computed with 40-digit arithmetic quadrature
    const double ref = 17911075.2381731;
    CHECK(table_model().c_sum() == Catch::Approx(ref).epsilon(1e-8));

    const RateTarget t = table_model().rate_target(0.5);
    CHECK(t.r_th_bps == Catch::Approx(0.5 * t.c_sum_bps));
    CHECK(table_model().rate_target(0.0).r_th_bps == 0.0);
    CHECK_THROWS_AS(table_model().rate_target(1.5), std::invalid_argument);

    // P -> 0 drives C_sum to 0
    SystemParams tiny;
    tiny.power_w = 1e-30;
    const CapacityModel small(tiny, default_population(),
                              method_options(ErgodicMethod::closed_form));
    CHECK(small.c_sum() < 1.0);
}

TEST_CASE("g1: edges, ICI ordering, monotonicity in eta") {
    const CapacityModel& model = table_model();
    const Trajectory traj = derive_trajectory(model.params());
    const SnrFactors edge = model.factors_for(traj.at(49));
    const SnrFactors center = model.factors_for(traj.at(0));

    CHECK(model.g1(0.0, 0.5, edge, true) == 0.0);
    CHECK(model.g1(0.5, 0.0, edge, true) == 0.0);
    CHECK_THROWS_AS(model.g1(1.5, 0.5, edge, true), std::invalid_argument);

    RngStream rng(37);
    for (int i = 0; i < 100; ++i) {
        const double eta = rng.u01();
        const double beta = rng.u01();
        CHECK(model.g1(eta, beta, edge, false) >=
              model.g1(eta, beta, edge, true) - 1e-9);
        // no Doppler at closest approach: both variants coincide
        CHECK(model.g1(eta, beta, center, false) ==
              model.g1(eta, beta, center, true));
    }

    for (bool with_ici : {false, true}) {
        double prev = -1.0;
        for (double eta = 0.0; eta <= 1.0; eta += 0.05) {
            const double v = model.g1(eta, 0.4, edge, with_ici);
            CHECK(v >= prev - 1e-9);
            prev = v;
        }
    }
}

TEST_CASE("g2: edges and monotonicity") {
    const CapacityModel& model = table_model();
    const Trajectory traj = derive_trajectory(model.params());
    const SnrFactors f = model.factors_for(traj.at(10));

    CHECK(model.g2(1.0, 0.5, f) == 0.0);
    CHECK(model.g2(0.5, 1.0, f) == 0.0);
    CHECK(model.g2(0.0, 0.0, f) == Catch::Approx(model.c_sum()).epsilon(1e-12));

    double prev = model.g2(0.0, 0.3, f);
    for (double eta = 0.05; eta <= 1.0; eta += 0.05) {
        const double v = model.g2(eta, 0.3, f);
        CHECK(v < prev);
        prev = v;
    }
    prev = model.g2(0.3, 0.0, f);
    for (double beta = 0.05; beta <= 1.0; beta += 0.05) {
        const double v = model.g2(0.3, beta, f);
        CHECK(v < prev);
        prev = v;
    }
}

TEST_CASE("g1 is midpoint-concave in (eta, beta)") {
    // closed-form evaluator: accurate enough to resolve the slack
    const CapacityModel model(SystemParams{}, default_population(),
                              method_options(ErgodicMethod::closed_form));
    const Trajectory traj = derive_trajectory(model.params());
    RngStream rng(41);
    for (int period : {8, 49}) {
        const SnrFactors f = model.factors_for(traj.at(period));
        for (int i = 0; i < 50; ++i) {
            const double e1 = rng.u01(), b1 = 0.001 + 0.999 * rng.u01();
            const double e2 = rng.u01(), b2 = 0.001 + 0.999 * rng.u01();
            const double va = model.g1(e1, b1, f, true);
            const double vb = model.g1(e2, b2, f, true);
            const double vm =
                model.g1(0.5 * (e1 + e2), 0.5 * (b1 + b2), f, true);
            const double scale = std::max({1.0, std::abs(va), std::abs(vb)});
            REQUIRE(vm - 0.5 * (va + vb) >= -1e-9 * scale);
        }
    }
}

TEST_CASE("factors: Doppler attenuation switch") {
    const Trajectory traj = derive_trajectory(SystemParams{});
    CapacityOptions with = method_options(ErgodicMethod::closed_form);
    CapacityOptions without = with;
    without.doppler_attenuation = false;
    const CapacityModel m_with(SystemParams{}, default_population(), with);
    const CapacityModel m_without(SystemParams{}, default_population(), without);

    const SnrFactors f_with = m_with.factors_for(traj.at(49));
    const SnrFactors f_without = m_without.factors_for(traj.at(49));
    const double atten = mr_diag_gain_mean(traj.at(49).doppler_hz,
                                           SystemParams{}.symbol_s(), 512);
    CHECK(f_with.gamma0 == Catch::Approx(f_without.gamma0 * atten).epsilon(1e-12));
    CHECK(f_without.gamma0 == Catch::Approx(0.02530127341417881).epsilon(1e-9));
    // attenuation does not touch the local users or the ICI factor
    CHECK(f_with.gamma_ici0 == f_without.gamma_ici0);
    CHECK(f_with.group_gamma == f_without.group_gamma);

    // local-user factors: gamma_m = P / (d_m^alpha N0 B)
    CHECK(f_with.group_gamma[0] == Catch::Approx(3164.5569620253164).epsilon(1e-12));
    CHECK(f_with.group_count == std::vector<int>{10, 10, 10, 10, 10});
}
