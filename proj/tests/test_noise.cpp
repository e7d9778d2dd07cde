#include <doctest.h>

#include <cmath>

#include "lloqss/errors.hpp"
#include "lloqss/noise.hpp"
#include "lloqss/rng.hpp"

using namespace lloqss;

namespace {

// Two users over 50 km of 0.2 dB/km fiber, evenly spaced: T1 = 0.1,
// T2 = 10^-0.5.
SystemConfig table_defaults() { return SystemConfig{}; }

}  // namespace

TEST_SUITE("noise") {

TEST_CASE("transmittance") {
    CHECK(transmittance(0.2, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(transmittance(0.2, 50.0) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(transmittance(0.2, 25.0) == doctest::Approx(0.316228).epsilon(1e-6));
    CHECK_THROWS_AS(transmittance(-0.1, 10.0), std::invalid_argument);
    CHECK_THROWS_AS(transmittance(0.2, -1.0), std::invalid_argument);
}

TEST_CASE("reference-signal noise figure") {
    CHECK(chi_ref(1.0, 1.0, 0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(chi_ref(0.1, 1.0, 0.0, 0.002) ==
          doctest::Approx(19.002).epsilon(1e-9));
    CHECK(chi_ref(0.316228, 1.0, 0.0, 0.002) ==
          doctest::Approx(5.3266).epsilon(2e-4));
    CHECK_THROWS_AS(chi_ref(0.0, 1.0, 0.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(chi_ref(0.5, 0.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("user geometry") {
    SystemConfig cfg = table_defaults();
    const auto d = user_distances(cfg);
    REQUIRE(d.size() == 2);
    CHECK(d[0] == doctest::Approx(50.0));
    CHECK(d[1] == doctest::Approx(25.0));

    cfg.placement = Placement::Asymmetric;
    cfg.spacing_km = 1.0;
    const auto da = user_distances(cfg);
    CHECK(da[0] == doctest::Approx(50.0));
    CHECK(da[1] == doctest::Approx(49.0));

    cfg.n_users = 4;
    cfg.v_mod = {4, 4, 4, 4};
    cfg.span_km = 2.0;
    const auto clamped = user_distances(cfg);
    CHECK(clamped[2] == doctest::Approx(0.0));  // 2 - 2*1 clamps at the dealer
    CHECK(clamped[3] == doctest::Approx(0.0));

    cfg.n_users = 2;
    cfg.v_mod = {4, 4};
    cfg.placement = Placement::Custom;
    cfg.custom_distances_km = {30.0, 12.0};
    const auto dc = user_distances(cfg);
    CHECK(dc[0] == doctest::Approx(30.0));
    CHECK(dc[1] == doctest::Approx(12.0));
}

TEST_CASE("budget worked example at the shipped defaults") {
    const NoiseBudget b = noise_budget(table_defaults());
    CHECK(std::fabs(b.eps_am - 0.016649) < 1e-5);
    CHECK(std::fabs(b.eps_le - 0.016649) < 1e-5);
    CHECK(std::fabs(b.eps_adc - 0.013549) < 1e-5);
    CHECK(std::fabs(b.eps_error - 0.080017) < 1e-4);
    CHECK(std::fabs(b.eps_total - 0.12686) < 2e-4);
    CHECK(b.eps_slow == 0.0);
    CHECK(b.eps_rest == 0.0);
    CHECK(b.eps_phase == doctest::Approx(b.eps_error + b.eps_slow));
    CHECK(b.chi_d == doctest::Approx(19.002).epsilon(1e-9));
    CHECK(b.chi_2 == doctest::Approx(5.3266).epsilon(2e-4));
}

TEST_CASE("all components are nonnegative over random configs") {
    RandomStream rs(77, 0);
    for (int i = 0; i < 300; ++i) {
        SystemConfig cfg = table_defaults();
        cfg.span_km = 1.0 + 80.0 * rs.uniform();
        cfg.v_mod = {0.5 + 10.0 * rs.uniform(), 0.5 + 10.0 * rs.uniform()};
        cfg.ref_intensity = 100.0 + 10000.0 * rs.uniform();
        cfg.adc_bits = 6 + static_cast<int>(rs.uniform() * 8);
        cfg.extinction_db = 30.0 + 40.0 * rs.uniform();
        cfg.dynamics_db = 20.0 + 40.0 * rs.uniform();
        cfg.v_slow = 0.001 * rs.uniform();
        cfg.eps_rest = 0.01 * rs.uniform();
        cfg.det.eta = 0.5 + 0.5 * rs.uniform();
        cfg.det.v_el = 0.1 * rs.uniform();
        const NoiseBudget b = noise_budget(cfg);
        CHECK(b.eps_am >= 0.0);
        CHECK(b.eps_le >= 0.0);
        CHECK(b.eps_adc >= 0.0);
        CHECK(b.eps_error >= 0.0);
        CHECK(b.eps_slow >= 0.0);
        CHECK(b.eps_phase >= 0.0);
        CHECK(b.eps_rest >= 0.0);
        CHECK(b.eps_total ==
              doctest::Approx(b.eps_am + b.eps_le + b.eps_adc + b.eps_phase +
                              b.eps_rest)
                  .epsilon(1e-12));
    }
}

TEST_CASE("components grow with the transmittance ratio") {
    SystemConfig near = table_defaults();
    // Moving user 2 closer to the dealer raises T2/T1.
    near.placement = Placement::Custom;
    near.custom_distances_km = {50.0, 10.0};
    SystemConfig far = near;
    far.custom_distances_km = {50.0, 40.0};
    const NoiseBudget bn = noise_budget(near);
    const NoiseBudget bf = noise_budget(far);
    CHECK(bn.eps_am > bf.eps_am);
    CHECK(bn.eps_le > bf.eps_le);
    CHECK(bn.eps_adc > bf.eps_adc);
    CHECK(bn.eps_error > bf.eps_error);
}

TEST_CASE("reference intensity trades leakage against measurement error") {
    const SystemConfig cfg = table_defaults();
    const NoiseBudget lo = noise_budget(cfg, 500.0);
    const NoiseBudget hi = noise_budget(cfg, 8000.0);
    CHECK(hi.eps_le > lo.eps_le);
    CHECK(hi.eps_error < lo.eps_error);
    // The product is an invariant of the intensity.
    CHECK(hi.eps_le * hi.eps_error ==
          doctest::Approx(lo.eps_le * lo.eps_error).epsilon(1e-12));
}

TEST_CASE("ideal-limit ladder sends the budget to zero") {
    SystemConfig cfg = table_defaults();
    cfg.dynamics_db = 400.0;
    cfg.extinction_db = 400.0;
    cfg.adc_bits = 60;
    const NoiseBudget b1 = noise_budget(cfg);
    CHECK(b1.eps_am < 1e-12);
    CHECK(b1.eps_le < 1e-12 * b1.eps_total + 1e-12);
    CHECK(b1.eps_adc < 1e-12);
    CHECK(b1.eps_total == doctest::Approx(b1.eps_error).epsilon(1e-6));

    // A very bright reference then drives the error term down too.
    const NoiseBudget b2 = noise_budget(cfg, 1e12);
    CHECK(b2.eps_error < 1e-6);
}

TEST_CASE("single-user degenerate budget") {
    SystemConfig cfg = table_defaults();
    cfg.n_users = 1;
    cfg.v_mod = {4.0};
    const NoiseBudget b = noise_budget(cfg);
    CHECK(b.chi_2 == 0.0);
    CHECK(b.eps_total > 0.0);
}

TEST_CASE("config validation names the offending field") {
    SystemConfig cfg = table_defaults();
    cfg.beta = 1.5;
    CHECK_THROWS_AS(validate(cfg), ConfigError);

    cfg = table_defaults();
    cfg.v_mod = {4.0};  // two users need two entries
    CHECK_THROWS_AS(validate(cfg), ConfigError);

    cfg = table_defaults();
    cfg.ref_intensity = 0.0;
    CHECK_THROWS_AS(validate(cfg), ConfigError);

    cfg = table_defaults();
    cfg.det.eta = 1.2;
    CHECK_THROWS_AS(validate(cfg), ConfigError);

    cfg = table_defaults();
    cfg.placement = Placement::Custom;
    cfg.custom_distances_km = {10.0, 20.0};  // first entry must be farthest
    CHECK_THROWS_AS(validate(cfg), ConfigError);
}

}  // TEST_SUITE
