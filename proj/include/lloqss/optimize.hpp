#pragma once

#include <vector>

#include "lloqss/keyrate.hpp"
#include "lloqss/noise.hpp"

namespace lloqss {

// Reference intensity at which eps_error equals eps_le (closed form):
// sqrt(Re_lin * sum_j w_j V_j (chi_j + 1) / (2 * sum_j w_j)).
double optimal_reference_intensity(const SystemConfig& cfg);

// Same root located by bisection on eps_error - eps_le; kept as an
// independent cross-check of the closed form.
double optimal_reference_intensity_bisect(const SystemConfig& cfg);

// System rate with the reference intensity taken from the config or
// re-optimized on the spot.
SystemRateReport evaluate_system(const SystemConfig& cfg, bool optimize_ref);

// Largest span with a positive system rate, reference intensity re-optimized
// at every probed span; 0 when the rate is nonpositive already at 0.1 km.
// Bisection to 0.01 km, deterministic for a fixed config. Custom placements
// are rescaled proportionally with the span.
double max_distance(const SystemConfig& cfg);

// Excess noise at which the system rate at the given span crosses zero
// (bisection to 1e-6 SNU). Throws NoPositiveRateError when the rate is
// nonpositive already at zero excess noise.
double tolerable_excess_noise(const SystemConfig& cfg, double span_km);

struct DistancePoint {
    double span_km = 0.0;
    double rate = 0.0;
    NoiseBudget budget;
    double ref_intensity = 0.0;
    double eps_tolerable = 0.0;  // NaN where no positive rate exists at eps=0
};

struct VariancePoint {
    double v1 = 0.0, v2 = 0.0;
    double rate = 0.0;
    double eps_total = 0.0;
    double ref_intensity = 0.0;
};

struct RatioPoint {
    double ratio = 0.0;  // user1->user2 share of the total span
    double rate = 0.0;
    NoiseBudget budget;
    double ref_intensity = 0.0;
};

struct UsersPoint {
    int n_users = 0;
    double max_span_km = 0.0;
    double eps_total_at_max = 0.0;   // NaN when no positive span exists
    double ref_intensity_at_max = 0.0;
};

// Dense grid evaluations. `parallel` toggles the OpenMP loop; results are
// bit-identical either way (rows are stored by grid index).
std::vector<DistancePoint> scan_distance(const SystemConfig& cfg, double l_min,
                                         double l_max, int points,
                                         bool optimize_ref, bool parallel);
std::vector<VariancePoint> scan_variance(const SystemConfig& cfg, double v1_max,
                                         double v2_max, int grid,
                                         bool optimize_ref, bool parallel);
std::vector<RatioPoint> scan_ratio(const SystemConfig& cfg, int points,
                                   bool optimize_ref, bool parallel);
std::vector<UsersPoint> scan_users(const SystemConfig& cfg, int n_min, int n_max,
                                   bool parallel);

}  // namespace lloqss
