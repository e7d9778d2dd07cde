#include "lloqss/optimize.hpp"

#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <string>

#include "lloqss/errors.hpp"

namespace lloqss {

namespace {

// Bisection for a decreasing f with f(lo) > 0 >= f(hi); returns after the
// interval shrinks below xtol or 60 iterations, whichever comes first.
template <typename F>
std::pair<double, double> bisect_down(F&& f, double lo, double hi, double xtol) {
    for (int i = 0; i < 60 && hi - lo > xtol; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? lo : hi) = mid;
    }
    return {lo, hi};
}

SystemConfig with_span(const SystemConfig& cfg, double span_km) {
    SystemConfig c = cfg;
    if (c.placement == Placement::Custom) {
        if (!(cfg.span_km > 0.0)) {
            throw ConfigError("custom placement needs span_km > 0 to rescale");
        }
        const double factor = span_km / cfg.span_km;
        for (double& l : c.custom_distances_km) l *= factor;
    }
    c.span_km = span_km;
    return c;
}

}  // namespace

double optimal_reference_intensity(const SystemConfig& cfg) {
    validate(cfg);
    const auto ts = user_transmittances(cfg);
    const double re_lin = std::pow(10.0, cfg.extinction_db / 10.0);
    double s = 0.0, w_sum = 0.0;
    for (std::size_t j = 0; j < ts.size(); ++j) {
        const double w = ts[j] / ts[0];
        const double chi = chi_ref(ts[j], cfg.det.eta, cfg.det.v_el, cfg.eps_ch);
        s += w * cfg.v_mod[j] * (chi + 1.0);
        w_sum += w;
    }
    return std::sqrt(re_lin * s / (2.0 * w_sum));
}

double optimal_reference_intensity_bisect(const SystemConfig& cfg) {
    validate(cfg);
    auto gap = [&](double a) {
        const NoiseBudget b = noise_budget(cfg, a);
        return b.eps_error - b.eps_le;  // decreasing in a
    };
    double lo = 1e-3;
    if (gap(lo) <= 0.0) throw std::logic_error("reference-intensity bracket: low end");
    double hi = 1.0;
    int guard = 0;
    while (gap(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (++guard > 60) throw std::logic_error("reference-intensity bracket: high end");
    }
    while (hi - lo > 1e-9 * hi) {
        const double mid = 0.5 * (lo + hi);
        (gap(mid) > 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

SystemRateReport evaluate_system(const SystemConfig& cfg, bool optimize_ref) {
    const double a = optimize_ref ? optimal_reference_intensity(cfg) : cfg.ref_intensity;
    return system_key_rate(cfg, a);
}

double max_distance(const SystemConfig& cfg) {
    validate(cfg);
    auto rate_at = [&](double span) {
        return evaluate_system(with_span(cfg, span), true).rate;
    };
    if (rate_at(0.1) <= 0.0) return 0.0;
    double lo = 0.1, hi = 100.0;
    int guard = 0;
    while (rate_at(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (++guard > 20) return hi;  // effectively unbounded geometry
    }
    return bisect_down(rate_at, lo, hi, 0.01).first;
}

double tolerable_excess_noise(const SystemConfig& cfg, double span_km) {
    validate(cfg);
    const SystemConfig c = with_span(cfg, span_km);
    const auto ts = user_transmittances(c);
    auto rate_at = [&](double eps) {
        double r = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < ts.size(); ++j) {
            KeyRateInputs in;
            in.v_mod = c.v_mod[j];
            in.T = ts[j];
            in.eps = eps;
            in.eta = c.det.eta;
            in.v_el = c.det.v_el;
            in.beta = c.beta;
            r = std::min(r, link_key_rate(in).rate);
        }
        return r;
    };
    if (rate_at(0.0) <= 0.0) {
        throw NoPositiveRateError("no positive rate at zero excess noise, span "
                                  + std::to_string(span_km) + " km");
    }
    double lo = 0.0, hi = 0.5;
    int guard = 0;
    while (rate_at(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (++guard > 40) throw std::logic_error("tolerable-noise bracket: high end");
    }
    const auto [a, b] = bisect_down(rate_at, lo, hi, 1e-6);
    return 0.5 * (a + b);
}

namespace {

// Runs `body(i)` over [0, n), optionally under OpenMP; the first exception
// (if any) is rethrown after the loop so it cannot cross the parallel region.
template <typename Body>
void indexed_loop(int n, bool parallel, Body&& body) {
    std::exception_ptr first_error = nullptr;
    if (parallel) {
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < n; ++i) {
            try {
                body(i);
            } catch (...) {
#pragma omp critical
                if (!first_error) first_error = std::current_exception();
            }
        }
    } else {
        for (int i = 0; i < n; ++i) {
            try {
                body(i);
            } catch (...) {
                if (!first_error) first_error = std::current_exception();
            }
        }
    }
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

std::vector<DistancePoint> scan_distance(const SystemConfig& cfg, double l_min,
                                         double l_max, int points,
                                         bool optimize_ref, bool parallel) {
    validate(cfg);
    if (points < 2 || !(l_min >= 0.0) || !(l_max > l_min)) {
        throw ConfigError("scan_distance: need points >= 2 and 0 <= l_min < l_max");
    }
    std::vector<DistancePoint> rows(static_cast<std::size_t>(points));
    indexed_loop(points, parallel, [&](int i) {
        DistancePoint& row = rows[static_cast<std::size_t>(i)];
        row.span_km = l_min + (l_max - l_min) * static_cast<double>(i)
                                             / static_cast<double>(points - 1);
        const SystemConfig c = with_span(cfg, row.span_km);
        const SystemRateReport rep = evaluate_system(c, optimize_ref);
        row.rate = rep.rate;
        row.budget = rep.budget;
        row.ref_intensity = rep.ref_intensity;
        try {
            row.eps_tolerable = tolerable_excess_noise(cfg, row.span_km);
        } catch (const NoPositiveRateError&) {
            row.eps_tolerable = std::numeric_limits<double>::quiet_NaN();
        }
    });
    return rows;
}

std::vector<VariancePoint> scan_variance(const SystemConfig& cfg, double v1_max,
                                         double v2_max, int grid,
                                         bool optimize_ref, bool parallel) {
    validate(cfg);
    if (cfg.n_users < 2) throw ConfigError("scan_variance: needs at least two users");
    if (grid < 1 || !(v1_max > 0.0) || !(v2_max > 0.0)) {
        throw ConfigError("scan_variance: need grid >= 1 and positive variance limits");
    }
    std::vector<VariancePoint> rows(static_cast<std::size_t>(grid) * grid);
    indexed_loop(grid * grid, parallel, [&](int idx) {
        const int i = idx / grid, j = idx % grid;
        VariancePoint& row = rows[static_cast<std::size_t>(idx)];
        row.v1 = v1_max * static_cast<double>(i + 1) / grid;
        row.v2 = v2_max * static_cast<double>(j + 1) / grid;
        SystemConfig c = cfg;
        c.v_mod[0] = row.v1;
        c.v_mod[1] = row.v2;
        const SystemRateReport rep = evaluate_system(c, optimize_ref);
        row.rate = rep.rate;
        row.eps_total = rep.budget.eps_total;
        row.ref_intensity = rep.ref_intensity;
    });
    return rows;
}

std::vector<RatioPoint> scan_ratio(const SystemConfig& cfg, int points,
                                   bool optimize_ref, bool parallel) {
    validate(cfg);
    if (cfg.n_users != 2) throw ConfigError("scan_ratio: defined for two users");
    if (points < 2 || !(cfg.span_km > 0.0)) {
        throw ConfigError("scan_ratio: need points >= 2 and span_km > 0");
    }
    std::vector<RatioPoint> rows(static_cast<std::size_t>(points));
    indexed_loop(points, parallel, [&](int i) {
        RatioPoint& row = rows[static_cast<std::size_t>(i)];
        row.ratio = (static_cast<double>(i) + 0.5) / points;
        SystemConfig c = cfg;
        c.placement = Placement::Custom;
        c.custom_distances_km = {cfg.span_km, (1.0 - row.ratio) * cfg.span_km};
        const SystemRateReport rep = evaluate_system(c, optimize_ref);
        row.rate = rep.rate;
        row.budget = rep.budget;
        row.ref_intensity = rep.ref_intensity;
    });
    return rows;
}

std::vector<UsersPoint> scan_users(const SystemConfig& cfg, int n_min, int n_max,
                                   bool parallel) {
    validate(cfg);
    if (n_min < 1 || n_max < n_min) throw ConfigError("scan_users: bad user range");
    if (cfg.placement == Placement::Custom) {
        throw ConfigError("scan_users: use symmetric or asymmetric placement");
    }
    const int count = n_max - n_min + 1;
    std::vector<UsersPoint> rows(static_cast<std::size_t>(count));
    indexed_loop(count, parallel, [&](int i) {
        UsersPoint& row = rows[static_cast<std::size_t>(i)];
        row.n_users = n_min + i;
        SystemConfig c = cfg;
        c.n_users = row.n_users;
        c.v_mod.assign(static_cast<std::size_t>(row.n_users), cfg.v_mod[0]);
        row.max_span_km = max_distance(c);
        if (row.max_span_km > 0.0) {
            const SystemRateReport rep =
                evaluate_system(with_span(c, row.max_span_km), true);
            row.eps_total_at_max = rep.budget.eps_total;
            row.ref_intensity_at_max = rep.ref_intensity;
        } else {
            row.eps_total_at_max = std::numeric_limits<double>::quiet_NaN();
            row.ref_intensity_at_max = std::numeric_limits<double>::quiet_NaN();
        }
    });
    return rows;
}

}  // namespace lloqss
