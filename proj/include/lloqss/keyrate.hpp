#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "lloqss/noise.hpp"

namespace lloqss {

// One link of the star: the evaluated user's modulation, the transmittance of
// that user's span, and the excess noise charged to it.
struct KeyRateInputs {
    double v_mod = 4.0;  // modulation variance V_U, SNU
    double T = 1.0;      // link transmittance
    double eps = 0.0;    // excess noise, SNU
    double eta = 1.0;
    double v_el = 0.0;
    double beta = 0.95;
};

struct KeyRateReport {
    double chi_line = 0.0;  // channel-added noise referred to the input
    double chi_het = 0.0;   // heterodyne-detector noise
    double chi_tot = 0.0;   // chi_line + chi_het/T
    double mutual_info = 0.0;        // bits/pulse
    std::array<double, 5> lambda{};  // symplectic eigenvalues
    double holevo = 0.0;             // eavesdropper information, bits/pulse
    double rate = 0.0;               // beta*mutual_info - holevo, unclamped
};

// G(x) = (x+1)log2(x+1) - x log2 x, continuous at 0.
double g_function(double x);

// Repeaterless secret-key capacity -log2(1-T) of a lossy channel.
double plob_bound(double T);

// Asymptotic reverse-reconciliation rate against collective attacks,
// heterodyne detection. Negative rates are returned as-is.
KeyRateReport link_key_rate(const KeyRateInputs& in);

struct SystemRateReport {
    double rate = 0.0;            // min over links
    std::size_t limiting_link = 0;
    std::vector<KeyRateReport> links;
    NoiseBudget budget;
    double ref_intensity = 0.0;   // |alpha_R1|^2 the budget was taken at
};

// Every link is charged the full system excess noise with its own V_U and T.
SystemRateReport system_key_rate(const SystemConfig& cfg);
SystemRateReport system_key_rate(const SystemConfig& cfg, double ref_intensity);

namespace detail {
// Eigenvalues of x^4 - s x^2 + p = 0, largest first. Radicands inside
// [-1e-9, 0) are rounding dust and clamp to 0; anything lower throws
// NumericalDomainError.
std::array<double, 2> lambda_pair(double s, double p);
}  // namespace detail

}  // namespace lloqss
