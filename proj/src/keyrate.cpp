#include "lloqss/keyrate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "lloqss/errors.hpp"

namespace lloqss {

double g_function(double x) {
    if (x < 0.0) throw std::invalid_argument("g_function: negative argument");
    if (x == 0.0) return 0.0;
    return (x + 1.0) * std::log2(x + 1.0) - x * std::log2(x);
}

double plob_bound(double T) {
    if (!(T > 0.0) || T >= 1.0) {
        throw std::invalid_argument("plob_bound: T must lie in (0, 1)");
    }
    return -std::log2(1.0 - T);
}

namespace detail {

std::array<double, 2> lambda_pair(double s, double p) {
    double disc = s * s - 4.0 * p;
    if (disc < 0.0) {
        if (disc < -1e-9) {
            throw NumericalDomainError("eigenvalue radicand " + std::to_string(disc));
        }
        disc = 0.0;
    }
    const double root = std::sqrt(disc);
    auto eig = [](double sq) {
        if (sq < 0.0) {
            if (sq < -1e-9) {
                throw NumericalDomainError("negative squared eigenvalue " + std::to_string(sq));
            }
            sq = 0.0;
        }
        return std::sqrt(sq);
    };
    return {eig(0.5 * (s + root)), eig(0.5 * (s - root))};
}

}  // namespace detail

KeyRateReport link_key_rate(const KeyRateInputs& in) {
    if (!(in.T > 0.0) || in.T > 1.0) {
        throw std::invalid_argument("link_key_rate: T must lie in (0, 1]");
    }
    if (!(in.eta > 0.0) || in.eta > 1.0) {
        throw std::invalid_argument("link_key_rate: eta must lie in (0, 1]");
    }
    if (in.v_mod < 0.0) throw std::invalid_argument("link_key_rate: negative v_mod");
    if (in.eps < 0.0) throw std::invalid_argument("link_key_rate: negative eps");
    if (in.v_el < 0.0) throw std::invalid_argument("link_key_rate: negative v_el");
    if (in.beta < 0.0 || in.beta > 1.0) {
        throw std::invalid_argument("link_key_rate: beta must lie in [0, 1]");
    }

    const double V = in.v_mod + 1.0;
    const double T = in.T;
    KeyRateReport r;
    r.chi_line = 1.0 / T - 1.0 + in.eps;
    r.chi_het = (2.0 - in.eta + 2.0 * in.v_el) / in.eta;
    r.chi_tot = r.chi_line + r.chi_het / T;
    r.mutual_info = std::log2((V + r.chi_tot) / (1.0 + r.chi_tot));

    const double a = V * V * (1.0 - 2.0 * T) + 2.0 * T
                   + T * T * (V + r.chi_line) * (V + r.chi_line);
    const double b = T * T * (V * r.chi_line + 1.0) * (V * r.chi_line + 1.0);
    const auto l12 = detail::lambda_pair(a, b);

    const double sqrt_b = std::sqrt(b);
    const double den = T * (V + r.chi_tot);
    const double c = (a * r.chi_het * r.chi_het + b + 1.0
                      + 2.0 * r.chi_het * (V * sqrt_b + T * (V + r.chi_line))
                      + 2.0 * T * (V * V - 1.0)) / (den * den);
    const double d = (V + sqrt_b * r.chi_het) * (V + sqrt_b * r.chi_het) / (den * den);
    const auto l34 = detail::lambda_pair(c, d);

    r.lambda = {l12[0], l12[1], l34[0], l34[1], 1.0};

    // (lambda-1)/2 can dip a hair below zero from the radicand clamp; treat
    // the same dust band as zero and report anything worse.
    auto g_arg = [](double lam) {
        double x = 0.5 * (lam - 1.0);
        if (x < 0.0) {
            if (x < -5e-10) {
                throw NumericalDomainError("symplectic eigenvalue below the vacuum floor: "
                                           + std::to_string(lam));
            }
            x = 0.0;
        }
        return x;
    };
    r.holevo = g_function(g_arg(r.lambda[0])) + g_function(g_arg(r.lambda[1]))
             - g_function(g_arg(r.lambda[2])) - g_function(g_arg(r.lambda[3]))
             - g_function(g_arg(r.lambda[4]));
    r.rate = in.beta * r.mutual_info - r.holevo;
    return r;
}

SystemRateReport system_key_rate(const SystemConfig& cfg) {
    return system_key_rate(cfg, cfg.ref_intensity);
}

SystemRateReport system_key_rate(const SystemConfig& cfg, double ref_intensity) {
    SystemRateReport out;
    out.budget = noise_budget(cfg, ref_intensity);
    out.ref_intensity = ref_intensity;
    const auto ts = user_transmittances(cfg);
    out.links.reserve(ts.size());
    for (std::size_t j = 0; j < ts.size(); ++j) {
        KeyRateInputs in;
        in.v_mod = cfg.v_mod[j];
        in.T = ts[j];
        in.eps = out.budget.eps_total;
        in.eta = cfg.det.eta;
        in.v_el = cfg.det.v_el;
        in.beta = cfg.beta;
        out.links.push_back(link_key_rate(in));
        if (j == 0 || out.links[j].rate < out.rate) {
            out.rate = out.links[j].rate;
            out.limiting_link = j;
        }
    }
    return out;
}

}  // namespace lloqss
