#include <doctest.h>

#include <cmath>

#include "lloqss/errors.hpp"
#include "lloqss/keyrate.hpp"
#include "lloqss/rng.hpp"

using namespace lloqss;

namespace {

KeyRateInputs inputs(double v_mod, double t, double eps, double eta = 1.0,
                     double v_el = 0.0, double beta = 0.95) {
    KeyRateInputs in;
    in.v_mod = v_mod;
    in.T = t;
    in.eps = eps;
    in.eta = eta;
    in.v_el = v_el;
    in.beta = beta;
    return in;
}

}  // namespace

TEST_SUITE("keyrate") {

TEST_CASE("entropy helper") {
    CHECK(g_function(0.0) == 0.0);
    CHECK(g_function(1.0) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(g_function(0.5) == doctest::Approx(1.377444).epsilon(1e-6));
    CHECK_THROWS_AS(g_function(-0.1), std::invalid_argument);
}

TEST_CASE("lossless noiseless channel leaks nothing") {
    const KeyRateReport r = link_key_rate(inputs(4.0, 1.0, 0.0));
    CHECK(r.chi_line == doctest::Approx(0.0));
    CHECK(r.chi_het == doctest::Approx(1.0));
    CHECK(r.chi_tot == doctest::Approx(1.0));
    CHECK(r.mutual_info == doctest::Approx(std::log2(3.0)).epsilon(1e-12));
    for (double l : r.lambda) CHECK(l == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::fabs(r.holevo) < 1e-9);
    CHECK(r.rate == doctest::Approx(0.95 * std::log2(3.0)).epsilon(1e-5));

    // Any modulation variance, same conclusion.
    for (double v : {0.5, 2.0, 20.0, 100.0}) {
        const KeyRateReport rv = link_key_rate(inputs(v, 1.0, 0.0));
        CHECK(std::fabs(rv.holevo) < 1e-9);
    }
}

TEST_CASE("zero reconciliation keeps only the negative part") {
    const KeyRateReport r = link_key_rate(inputs(4.0, 0.5, 0.05, 1.0, 0.0, 0.0));
    CHECK(r.rate == doctest::Approx(-r.holevo).epsilon(1e-12));
    CHECK(r.rate <= 0.0);
}

TEST_CASE("repeaterless capacity") {
    CHECK(plob_bound(0.5) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(plob_bound(0.1) == doctest::Approx(0.152003).epsilon(1e-6));
    CHECK_THROWS_AS(plob_bound(1.0), std::invalid_argument);
    CHECK_THROWS_AS(plob_bound(0.0), std::invalid_argument);
}

TEST_CASE("eigenvalues respect the uncertainty floor over a grid") {
    for (double t : {0.05, 0.1, 0.3, 0.6, 0.9, 1.0}) {
        for (double eps : {0.0, 0.01, 0.05, 0.15}) {
            for (double v : {1.0, 4.0, 10.0}) {
                const KeyRateReport r = link_key_rate(inputs(v, t, eps));
                for (double l : r.lambda) CHECK(l >= 1.0 - 1e-9);
                // lambda1 * lambda2 = sqrt(B) is exact for the quartic.
                const double b = r.lambda[0] * r.lambda[0] * r.lambda[1] *
                                 r.lambda[1];
                const double vv = v + 1.0;
                const double chi = 1.0 / t - 1.0 + eps;
                const double bexp = t * t * (vv * chi + 1.0) * (vv * chi + 1.0);
                CHECK(b == doctest::Approx(bexp).epsilon(1e-9));
                CHECK(r.mutual_info >= 0.0);
            }
        }
    }
}

TEST_CASE("rate is monotone in the physical knobs") {
    const KeyRateInputs base = inputs(4.0, 0.3, 0.03, 0.9, 0.05);
    const double r0 = link_key_rate(base).rate;

    KeyRateInputs worse = base;
    worse.eps = 0.05;
    CHECK(link_key_rate(worse).rate < r0);

    worse = base;
    worse.v_el = 0.15;
    CHECK(link_key_rate(worse).rate < r0);

    KeyRateInputs better = base;
    better.eta = 1.0;
    CHECK(link_key_rate(better).rate > r0);

    better = base;
    better.beta = 0.99;
    CHECK(link_key_rate(better).rate > r0);
}

TEST_CASE("excess-noise sweep crosses zero exactly once") {
    double prev = link_key_rate(inputs(4.0, 0.1, 0.0)).rate;
    CHECK(prev > 0.0);
    int sign_changes = 0;
    for (int i = 1; i <= 60; ++i) {
        const double eps = 0.3 * i / 60.0;
        const double r = link_key_rate(inputs(4.0, 0.1, eps)).rate;
        CHECK(r < prev);  // strictly decreasing
        if (prev > 0.0 && r <= 0.0) ++sign_changes;
        prev = r;
    }
    CHECK(prev < 0.0);
    CHECK(sign_changes == 1);
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(link_key_rate(inputs(4.0, 0.0, 0.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(link_key_rate(inputs(4.0, 1.2, 0.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(link_key_rate(inputs(-1.0, 0.5, 0.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(link_key_rate(inputs(4.0, 0.5, -0.01)),
                    std::invalid_argument);
}

TEST_CASE("quartic solver separates rounding dust from bad inputs") {
    // Discriminant slightly negative: clamps.
    const auto ok = detail::lambda_pair(2.0, 1.0 + 1e-10);
    CHECK(ok[0] == doctest::Approx(1.0).epsilon(1e-5));
    // Clearly negative: rejected.
    CHECK_THROWS_AS(detail::lambda_pair(2.0, 1.4), NumericalDomainError);
}

TEST_CASE("system rate reduces to the single link when alone") {
    SystemConfig cfg;
    cfg.n_users = 1;
    cfg.v_mod = {4.0};
    const SystemRateReport sys = system_key_rate(cfg);
    REQUIRE(sys.links.size() == 1);
    CHECK(sys.rate == doctest::Approx(sys.links[0].rate));
    CHECK(sys.limiting_link == 0);

    KeyRateInputs in = inputs(4.0, transmittance(cfg.alpha_db_per_km, 50.0),
                              sys.budget.eps_total);
    CHECK(sys.rate == doctest::Approx(link_key_rate(in).rate).epsilon(1e-12));
}

TEST_CASE("identical links tie and the farthest limits otherwise") {
    SystemConfig cfg;  // symmetric two users, 50 km
    const SystemRateReport sys = system_key_rate(cfg);
    REQUIRE(sys.links.size() == 2);
    CHECK(sys.limiting_link == 0);  // farthest user pays the most loss
    CHECK(sys.rate == doctest::Approx(sys.links[0].rate));
    CHECK(sys.links[0].rate < sys.links[1].rate);

    // Degenerate geometry: both users at the dealer's doorstep.
    SystemConfig close = cfg;
    close.span_km = 1e-8;
    const SystemRateReport tied = system_key_rate(close);
    CHECK(std::fabs(tied.links[0].rate - tied.links[1].rate) < 1e-8);
}

}  // TEST_SUITE
