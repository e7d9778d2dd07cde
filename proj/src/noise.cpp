#include "lloqss/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "lloqss/errors.hpp"

namespace lloqss {

void validate(const SystemConfig& cfg) {
    if (!(cfg.alpha_db_per_km >= 0.0)) throw ConfigError("alpha_db_per_km must be >= 0");
    if (!(cfg.beta > 0.0) || cfg.beta > 1.0) throw ConfigError("beta must lie in (0, 1]");
    if (!(cfg.eps_ch >= 0.0)) throw ConfigError("eps_ch must be >= 0");
    if (cfg.adc_bits < 1) throw ConfigError("adc_bits must be >= 1");
    if (!(cfg.extinction_db > 0.0)) throw ConfigError("extinction_db must be > 0");
    if (!(cfg.dynamics_db > 0.0)) throw ConfigError("dynamics_db must be > 0");
    if (cfg.n_users < 1) throw ConfigError("n_users must be >= 1");
    if (cfg.v_mod.size() != static_cast<std::size_t>(cfg.n_users)) {
        throw ConfigError("v_mod must list one variance per user");
    }
    for (double v : cfg.v_mod) {
        if (!(v > 0.0)) throw ConfigError("v_mod entries must be > 0");
    }
    if (!(cfg.smax_factor > 0.0)) throw ConfigError("smax_factor must be > 0");
    if (!(cfg.ref_intensity > 0.0)) throw ConfigError("ref_intensity must be > 0");
    if (!(cfg.v_slow >= 0.0)) throw ConfigError("v_slow must be >= 0");
    if (!(cfg.eps_rest >= 0.0)) throw ConfigError("eps_rest must be >= 0");
    if (!(cfg.det.eta > 0.0) || cfg.det.eta > 1.0) throw ConfigError("eta must lie in (0, 1]");
    if (!(cfg.det.v_el >= 0.0)) throw ConfigError("v_el must be >= 0");
    if (!(cfg.span_km >= 0.0)) throw ConfigError("span_km must be >= 0");
    if (!(cfg.spacing_km > 0.0)) throw ConfigError("spacing_km must be > 0");
    if (cfg.placement == Placement::Custom) {
        if (cfg.custom_distances_km.size() != static_cast<std::size_t>(cfg.n_users)) {
            throw ConfigError("custom_distances_km must list one span per user");
        }
        for (double l : cfg.custom_distances_km) {
            if (!(l >= 0.0)) throw ConfigError("custom_distances_km entries must be >= 0");
            if (l > cfg.custom_distances_km.front()) {
                throw ConfigError("custom_distances_km: user 1 must be the farthest");
            }
        }
    }
}

double transmittance(double alpha_db_per_km, double l_km) {
    if (alpha_db_per_km < 0.0 || l_km < 0.0) {
        throw std::invalid_argument("transmittance: negative input");
    }
    return std::pow(10.0, -alpha_db_per_km * l_km / 10.0);
}

double chi_ref(double T, double eta, double v_el, double eps_ch) {
    if (!(T > 0.0) || T > 1.0 || !(eta > 0.0) || eta > 1.0) {
        throw std::invalid_argument("chi_ref: T and eta must lie in (0, 1]");
    }
    if (v_el < 0.0 || eps_ch < 0.0) {
        throw std::invalid_argument("chi_ref: negative noise input");
    }
    return (2.0 - eta * T + 2.0 * v_el) / (eta * T) + eps_ch;
}

std::vector<double> user_distances(const SystemConfig& cfg) {
    const auto n = static_cast<std::size_t>(cfg.n_users);
    std::vector<double> ls(n);
    switch (cfg.placement) {
        case Placement::Symmetric:
            for (std::size_t i = 0; i < n; ++i) {
                ls[i] = cfg.span_km * static_cast<double>(n - i) / static_cast<double>(n);
            }
            break;
        case Placement::Asymmetric:
            for (std::size_t i = 0; i < n; ++i) {
                ls[i] = std::max(cfg.span_km - static_cast<double>(i) * cfg.spacing_km, 0.0);
            }
            break;
        case Placement::Custom:
            if (cfg.custom_distances_km.size() != n) {
                throw ConfigError("custom_distances_km must list one span per user");
            }
            ls = cfg.custom_distances_km;
            break;
    }
    return ls;
}

std::vector<double> user_transmittances(const SystemConfig& cfg) {
    const auto ls = user_distances(cfg);
    std::vector<double> ts(ls.size());
    for (std::size_t i = 0; i < ls.size(); ++i) {
        ts[i] = transmittance(cfg.alpha_db_per_km, ls[i]);
    }
    return ts;
}

NoiseBudget noise_budget(const SystemConfig& cfg) {
    return noise_budget(cfg, cfg.ref_intensity);
}

NoiseBudget noise_budget(const SystemConfig& cfg, double ref_intensity) {
    validate(cfg);
    if (!(ref_intensity > 0.0)) throw ConfigError("ref_intensity must be > 0");

    const auto ts = user_transmittances(cfg);
    const auto n = ts.size();
    const double t1 = ts[0];
    const double re_lin = std::pow(10.0, cfg.extinction_db / 10.0);
    const double dyn = std::pow(10.0, -cfg.dynamics_db / 10.0);
    const double adc_div = 12.0 * std::ldexp(1.0, cfg.adc_bits);

    NoiseBudget b;
    double weight_sum = 0.0;
    double weighted_v = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double w = ts[j] / t1;  // 1 for user 1, >= 1 downstream
        const double smax_sq = cfg.smax_factor * cfg.v_mod[j];
        const double chi = chi_ref(ts[j], cfg.det.eta, cfg.det.v_el, cfg.eps_ch);
        b.eps_am += w * smax_sq * dyn;
        b.eps_le += w * 2.0 * ref_intensity / re_lin;
        b.eps_adc += w * smax_sq / adc_div;
        b.eps_error += w * cfg.v_mod[j] * (chi + 1.0) / ref_intensity;
        weight_sum += w;
        weighted_v += w * cfg.v_mod[j];
        if (j == 0) b.chi_d = chi;
        if (j == 1) b.chi_2 = chi;
    }
    b.eps_slow = cfg.v_slow * weighted_v;
    b.eps_phase = b.eps_error + b.eps_slow;
    b.eps_rest = cfg.eps_rest;
    b.eps_total = b.eps_am + b.eps_le + b.eps_adc + b.eps_phase + b.eps_rest;
    return b;
}

}  // namespace lloqss
