#include <doctest.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "lloqss/quad.hpp"
#include "lloqss/rng.hpp"

using namespace lloqss;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_SUITE("quad") {

TEST_CASE("rotate worked examples") {
    const QuadPair a = rotate({1.0, 0.0}, 0.0);
    CHECK(a.x == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(a.p == doctest::Approx(0.0).epsilon(1e-15));

    // x' = x cos + p sin, p' = -x sin + p cos.
    const QuadPair b = rotate({1.0, 0.0}, kPi / 2);
    CHECK(b.x == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(b.p == doctest::Approx(-1.0).epsilon(1e-12));

    const QuadPair c = rotate({3.0, 4.0}, std::atan2(4.0, 3.0));
    CHECK(c.x == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(c.p == doctest::Approx(0.0).scale(5.0).epsilon(1e-12));
}

TEST_CASE("rotate preserves the norm") {
    RandomStream rs(31, 0);
    for (int i = 0; i < 2000; ++i) {
        const QuadPair v{rs.gaussian(9.0), rs.gaussian(9.0)};
        const double phi = rs.uniform_angle() - kPi;
        const QuadPair w = rotate(v, phi);
        const double n0 = v.x * v.x + v.p * v.p;
        const double n1 = w.x * w.x + w.p * w.p;
        const double ulp = std::ldexp(1.0, std::ilogb(n0 > 0 ? n0 : 1.0) - 52);
        CHECK(std::fabs(n1 - n0) <= 4.0 * ulp);
    }
}

TEST_CASE("rotate inverse and composition") {
    RandomStream rs(32, 0);
    for (int i = 0; i < 500; ++i) {
        const QuadPair v{rs.gaussian(4.0), rs.gaussian(4.0)};
        const double a = rs.uniform_angle(), b = rs.uniform_angle();
        const QuadPair back = rotate(rotate(v, a), -a);
        CHECK(std::fabs(back.x - v.x) < 1e-12);
        CHECK(std::fabs(back.p - v.p) < 1e-12);
        const QuadPair two = rotate(rotate(v, a), b);
        const QuadPair one = rotate(v, a + b);
        CHECK(std::fabs(two.x - one.x) < 1e-12);
        CHECK(std::fabs(two.p - one.p) < 1e-12);
    }
}

TEST_CASE("rotate rejects non-finite input") {
    const double inf = std::numeric_limits<double>::infinity();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(rotate({inf, 0.0}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(rotate({0.0, nan}, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(rotate({0.0, 0.0}, inf), std::invalid_argument);
}

TEST_CASE("mean_product worked examples") {
    const std::vector<double> a{1.0, 1.0}, b{2.0, 4.0};
    CHECK(mean_product(a, b) == doctest::Approx(3.0).epsilon(1e-15));

    const std::vector<double> c(1000, 1.5);
    CHECK(mean_product(c, c) == doctest::Approx(2.25).epsilon(1e-12));
}

TEST_CASE("mean_product input validation") {
    const std::vector<double> a{1.0, 2.0}, b{1.0};
    const std::vector<double> empty;
    CHECK_THROWS_AS(mean_product(a, b), std::invalid_argument);
    CHECK_THROWS_AS(mean_product(empty, empty), std::invalid_argument);
}

TEST_CASE("mean_product is symmetric and linear") {
    RandomStream rs(33, 0);
    std::vector<double> a(700), b(700), c(700);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = rs.gaussian(1.0);
        b[i] = rs.gaussian(1.0);
        c[i] = rs.gaussian(1.0);
    }
    CHECK(mean_product(a, b) == doctest::Approx(mean_product(b, a)).epsilon(1e-15));

    std::vector<double> a_scaled(a), a_plus_c(a);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a_scaled[i] = 2.5 * a[i];
        a_plus_c[i] = a[i] + c[i];
    }
    CHECK(mean_product(a_scaled, b) ==
          doctest::Approx(2.5 * mean_product(a, b)).epsilon(1e-12));
    CHECK(mean_product(a_plus_c, b) ==
          doctest::Approx(mean_product(a, b) + mean_product(c, b)).epsilon(1e-12));
}

TEST_CASE("chunked and serial reductions agree") {
    RandomStream rs(34, 0);
    // Deliberately not a multiple of the internal chunk size.
    std::vector<double> a(100003), b(100003);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = rs.gaussian(2.0);
        b[i] = rs.gaussian(2.0);
    }
    const double fast = mean_product(a, b);
    const double slow = mean_product_serial(a, b);
    CHECK(std::fabs(fast - slow) <=
          1e-12 * std::max(1.0, std::fabs(slow)));
}

TEST_CASE("independent series decorrelate at the sampling rate") {
    RandomStream rs(35, 0);
    const std::size_t n = 1000000;
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto g = rs.gaussian_pair(1.0);
        a[i] = g[0];
        b[i] = g[1];
    }
    CHECK(std::fabs(mean_product(a, b)) < 0.005);  // 5/sqrt(N)
}

TEST_CASE("quadrature component selection") {
    Series s;
    s.samples = {{1.0, 2.0}, {3.0, 4.0}};
    CHECK(component(s.samples[0], Quad::X) == 1.0);
    CHECK(component(s.samples[0], Quad::P) == 2.0);
    CHECK(component(s.samples[1], Quad::X) == 3.0);

    const double xx = mean_product(s.samples, Quad::X, s.samples, Quad::X);
    CHECK(xx == doctest::Approx(5.0).epsilon(1e-15));  // (1 + 9)/2
    const double xp = mean_product(s.samples, Quad::X, s.samples, Quad::P);
    CHECK(xp == doctest::Approx(7.0).epsilon(1e-15));  // (2 + 12)/2
}

TEST_CASE("sample_gaussian_pair honors the variance argument") {
    RandomStream rs(36, 0);
    const std::size_t n = 200000;
    double s2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const QuadPair g = sample_gaussian_pair(4.0, rs);
        s2 += g.x * g.x + g.p * g.p;
    }
    const double var = s2 / (2.0 * n);
    CHECK(var == doctest::Approx(4.0).epsilon(0.02));
    CHECK_THROWS_AS(sample_gaussian_pair(-0.5, rs), std::invalid_argument);
}

}  // TEST_SUITE
