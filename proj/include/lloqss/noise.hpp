#pragma once

#include <vector>

namespace lloqss {

struct DetectorParams {
    double eta = 1.0;   // detection efficiency, (0, 1]
    double v_el = 0.0;  // electronic noise, SNU
};

// How the n users are strung along the fiber. User 1 (index 0) is always the
// farthest from the dealer.
enum class Placement { Symmetric, Asymmetric, Custom };

// Full analytic-model parameter set: hardware, geometry, and per-user
// modulation. Distances are fiber spans to the dealer in km.
struct SystemConfig {
    double alpha_db_per_km = 0.2;  // fiber attenuation
    double beta = 0.95;            // reconciliation efficiency
    double eps_ch = 0.002;         // channel excess noise, SNU
    int adc_bits = 10;             // quantizer resolution
    double extinction_db = 60.0;   // modulator extinction ratio
    double dynamics_db = 40.0;     // modulator dynamics
    std::vector<double> v_mod{4.0, 4.0};  // modulation variance per user, SNU
    double smax_factor = 10.0;     // peak signal intensity = factor * V_U
    double ref_intensity = 2000.0; // reference photon number |alpha_R1|^2
    double v_slow = 0.0;           // residual slow-phase variance, rad^2
    double eps_rest = 0.0;         // unmodeled residual noise, SNU
    DetectorParams det;
    int n_users = 2;
    Placement placement = Placement::Symmetric;
    double span_km = 50.0;         // farthest-user distance L
    double spacing_km = 1.0;       // inter-user gap for asymmetric placement
    std::vector<double> custom_distances_km;  // per-user spans when Custom
};

// Throws ConfigError naming the first out-of-range field.
void validate(const SystemConfig& cfg);

// 10^(-alpha*l/10). Negative inputs throw std::invalid_argument.
double transmittance(double alpha_db_per_km, double l_km);

// Total noise on a reference signal measured after a channel of
// transmittance T: (2 - eta*T + 2*v_el)/(eta*T) + eps_ch.
double chi_ref(double T, double eta, double v_el, double eps_ch);

// Fiber span to the dealer per user, index 0 = farthest. Symmetric placement
// spreads users evenly over [span/n, span]; asymmetric packs users 2..n at
// spacing_km intervals just downstream of user 1, clamping anyone past the
// dealer to distance 0.
std::vector<double> user_distances(const SystemConfig& cfg);
std::vector<double> user_transmittances(const SystemConfig& cfg);

// Itemized excess noise referred to the channel input, SNU.
struct NoiseBudget {
    double eps_am = 0.0;     // modulation leakage
    double eps_le = 0.0;     // reference photon leakage
    double eps_adc = 0.0;    // quantization
    double eps_error = 0.0;  // reference-phase measurement error
    double eps_slow = 0.0;   // residual slow drift
    double eps_phase = 0.0;  // eps_error + eps_slow
    double eps_rest = 0.0;
    double eps_total = 0.0;
    double chi_d = 0.0;      // reference noise over the farthest span
    double chi_2 = 0.0;      // reference noise over user 2's span (0 if n=1)
};

// Every user-j term (j >= 2) carries weight T_j/T_1, referring it to the
// farthest user's channel input.
NoiseBudget noise_budget(const SystemConfig& cfg);  // at cfg.ref_intensity
NoiseBudget noise_budget(const SystemConfig& cfg, double ref_intensity);

}  // namespace lloqss
