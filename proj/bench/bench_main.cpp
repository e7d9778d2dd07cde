// Benchmark of the OpenMP kernels against their serial reference
// implementations. Also cross-checks that both flavors agree, so a
// disagreement shows up here as well as in the unit tests.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "lloqss/optimize.hpp"
#include "lloqss/protocol.hpp"
#include "lloqss/quad.hpp"
#include "lloqss/rng.hpp"

using namespace lloqss;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0)
        .count();
}

int failures = 0;

void report(const char* name, double serial_ms, double parallel_ms,
            bool agree) {
    std::printf("%-24s %10.1f ms %10.1f ms %8.2fx   %s\n", name, serial_ms,
                parallel_ms, serial_ms / parallel_ms,
                agree ? "match" : "MISMATCH");
    if (!agree) ++failures;
}

void bench_simulation() {
    SimConfig cfg;
    cfg.geom.l1_km = 25.0;
    cfg.geom.l2_km = 25.0;
    cfg.sigma_walk = 1e-4;
    cfg.start.thetaD_delay = 0.3;
    cfg.start.theta2_delay = -0.1;
    RandomStream rng(1234, 0);
    const std::size_t n = 1000000;

    auto t0 = Clock::now();
    const auto ser = simulate_block_serial(cfg, 0, n, rng);
    const double serial_ms = ms_since(t0);

    t0 = Clock::now();
    const auto par = simulate_block(cfg, 0, n, rng);
    const double parallel_ms = ms_since(t0);

    bool agree = ser.size() == par.size();
    for (std::size_t i = 0; agree && i < n; ++i) {
        agree = ser[i].user1.x == par[i].user1.x &&
                ser[i].user2.p == par[i].user2.p &&
                ser[i].dealer.x == par[i].dealer.x &&
                ser[i].thetaDR == par[i].thetaDR;
    }
    report("simulate_block 1e6", serial_ms, parallel_ms, agree);
}

void bench_mean_product() {
    RandomStream rng(1235, 0);
    const std::size_t n = 10000000;
    std::vector<double> a(n), b(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto g = rng.gaussian_pair(1.0);
        a[i] = g[0];
        b[i] = g[1];
    }

    auto t0 = Clock::now();
    double serial = 0.0;
    for (int rep = 0; rep < 5; ++rep) serial = mean_product_serial(a, b);
    const double serial_ms = ms_since(t0) / 5.0;

    t0 = Clock::now();
    double chunked = 0.0;
    for (int rep = 0; rep < 5; ++rep) chunked = mean_product(a, b);
    const double parallel_ms = ms_since(t0) / 5.0;

    // Chunked summation reorders additions; agreement is to rounding, not
    // bitwise.
    const bool agree = std::fabs(serial - chunked) <=
                       1e-12 * (std::fabs(serial) + 1e-6);
    report("mean_product 1e7 x5", serial_ms, parallel_ms, agree);
}

void bench_scan_distance() {
    SystemConfig cfg;

    auto t0 = Clock::now();
    const auto ser = scan_distance(cfg, 1.0, 60.0, 200, true, false);
    const double serial_ms = ms_since(t0);

    t0 = Clock::now();
    const auto par = scan_distance(cfg, 1.0, 60.0, 200, true, true);
    const double parallel_ms = ms_since(t0);

    bool agree = ser.size() == par.size();
    for (std::size_t i = 0; agree && i < ser.size(); ++i) {
        const bool nan_s = std::isnan(ser[i].eps_tolerable);
        const bool nan_p = std::isnan(par[i].eps_tolerable);
        agree = ser[i].rate == par[i].rate &&
                ser[i].ref_intensity == par[i].ref_intensity &&
                nan_s == nan_p &&
                (nan_s || ser[i].eps_tolerable == par[i].eps_tolerable);
    }
    report("scan_distance 200 pts", serial_ms, parallel_ms, agree);
}

}  // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n\n", omp_get_max_threads());
#else
    std::printf("OpenMP not available; both columns run serially\n\n");
#endif
    std::printf("%-24s %13s %13s %9s\n", "kernel", "serial", "parallel",
                "speedup");
    bench_simulation();
    bench_mean_product();
    bench_scan_distance();
    return failures == 0 ? 0 : 1;
}
