#include "lloqss/protocol.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "lloqss/errors.hpp"

namespace lloqss {

double ChannelGeometry::t1() const { return transmittance(alpha_db_per_km, l1_km + l2_km); }
double ChannelGeometry::t2() const { return transmittance(alpha_db_per_km, l2_km); }

std::pair<double, double> reference_phases(const PhaseState& s) {
    const double user1 = s.theta1_init + s.theta1_delay;
    return {user1 - (s.theta2_init + s.theta2_delay),
            user1 - (s.thetaD_init + s.thetaD_delay)};
}

std::pair<double, double> signal_drifts(const PhaseState& s) {
    return {s.theta1_init - s.thetaD_init, s.theta2_init - s.thetaD_init};
}

QuadPair dealer_measure(QuadPair s1, QuadPair s2, double phi1, double phi2,
                        double t1, double t2, const DetectorParams& det,
                        double noise_variance, RandomStream& rng) {
    if (!(t1 > 0.0) || t1 > t2 || t2 > 1.0) {
        throw std::invalid_argument("dealer_measure: need 0 < t1 <= t2 <= 1");
    }
    if (!(noise_variance >= 0.0)) {
        throw std::invalid_argument("dealer_measure: negative noise variance");
    }
    const double c1 = std::sqrt(det.eta * t1 / 2.0);
    const double c2 = std::sqrt(det.eta * t2 / 2.0);
    const QuadPair r1 = rotate(s1, phi1);
    const QuadPair r2 = rotate(s2, phi2);
    const QuadPair n = sample_gaussian_pair(noise_variance, rng);
    return {c1 * r1.x + c2 * r2.x + n.x, c1 * r1.p + c2 * r2.p + n.p};
}

namespace {

struct FrameConstants {
    double t1, t2;
    double noise_variance;
    double ref_sigma_d, ref_sigma_2;  // std dev of the phase-measurement error
    double walk_variance;
};

FrameConstants frame_constants(const SimConfig& cfg) {
    FrameConstants k;
    k.t1 = cfg.geom.t1();
    k.t2 = cfg.geom.t2();
    k.noise_variance = cfg.zero_detection_noise
        ? 0.0
        : 1.0 + cfg.det.v_el + (cfg.det.eta * k.t1 / 2.0) * cfg.eps_sim;
    const double chi_d = chi_ref(k.t1, cfg.det.eta, cfg.det.v_el, cfg.eps_ch);
    const double chi_2 = chi_ref(k.t2, cfg.det.eta, cfg.det.v_el, cfg.eps_ch);
    k.ref_sigma_d = std::sqrt((chi_d + 1.0) / cfg.ref_intensity);
    k.ref_sigma_2 = std::sqrt((chi_2 + 1.0) / cfg.ref_intensity);
    k.walk_variance = cfg.sigma_walk * cfg.sigma_walk;
    return k;
}

// Fixed per-frame draw budget, in order: three init angles, two walk pairs
// (user1/user2 increments, dealer increment + one unused), user-1 signal
// pair, user-2 signal pair, detector noise pair, reference-noise pair.
// Every draw happens on every frame regardless of config so that frame
// substreams stay aligned across all modes.
FrameRecord simulate_frame(const SimConfig& cfg, const FrameConstants& k,
                           std::uint64_t frame, const std::array<double, 3>& delay,
                           const RandomStream& base) {
    RandomStream rng = base.at_frame(frame);
    const double a1 = rng.uniform_angle();
    const double a2 = rng.uniform_angle();
    const double ad = rng.uniform_angle();
    rng.gaussian_pair(k.walk_variance);  // consumed by the delay-walk pass
    rng.gaussian_pair(k.walk_variance);

    PhaseState s;
    s.theta1_init = cfg.freeze_fast_drift ? cfg.start.theta1_init : a1;
    s.theta2_init = cfg.freeze_fast_drift ? cfg.start.theta2_init : a2;
    s.thetaD_init = cfg.freeze_fast_drift ? cfg.start.thetaD_init : ad;
    s.theta1_delay = delay[0];
    s.theta2_delay = delay[1];
    s.thetaD_delay = delay[2];

    FrameRecord f;
    f.user1 = sample_gaussian_pair(cfg.v_mod1, rng);
    f.user2 = sample_gaussian_pair(cfg.v_mod2, rng);
    const auto [phi1, phi2] = signal_drifts(s);
    f.phi1 = phi1;
    f.phi2 = phi2;
    f.dealer = dealer_measure(f.user1, f.user2, phi1, phi2, k.t1, k.t2, cfg.det,
                              k.noise_variance, rng);
    const auto [theta2R, thetaDR] = reference_phases(s);
    const auto ref_err = rng.gaussian_pair(1.0);
    f.thetaDR = thetaDR + (cfg.ref_noise ? k.ref_sigma_d * ref_err[0] : 0.0);
    f.theta2R = theta2R + (cfg.ref_noise ? k.ref_sigma_2 * ref_err[1] : 0.0);
    return f;
}

// Delay phases per frame: start values plus the walk increments of all
// earlier frames, accumulated serially in frame order so that every caller
// (serial, parallel, chained blocks) sees identical sums.
std::vector<std::array<double, 3>> delay_walk(const SimConfig& cfg,
                                              std::uint64_t first_frame,
                                              std::size_t n_frames,
                                              const RandomStream& base) {
    const double variance = cfg.sigma_walk * cfg.sigma_walk;
    std::vector<std::array<double, 3>> delays(n_frames);
    std::array<double, 3> cur = {cfg.start.theta1_delay, cfg.start.theta2_delay,
                                 cfg.start.thetaD_delay};
    for (std::uint64_t f = 0; f < first_frame + n_frames; ++f) {
        if (f >= first_frame) delays[f - first_frame] = cur;
        RandomStream rng = base.at_frame(f);
        rng.uniform();  // init-angle draws, unused in this pass
        rng.uniform();
        rng.uniform();
        const auto inc12 = rng.gaussian_pair(variance);
        const auto incd = rng.gaussian_pair(variance);
        cur[0] += inc12[0];
        cur[1] += inc12[1];
        cur[2] += incd[0];
    }
    return delays;
}

template <bool Parallel>
std::vector<FrameRecord> run_block(const SimConfig& cfg, std::uint64_t first_frame,
                                   std::size_t n_frames, const RandomStream& rng) {
    if (n_frames == 0) throw std::invalid_argument("simulate_block: n_frames == 0");
    const FrameConstants k = frame_constants(cfg);
    const auto delays = delay_walk(cfg, first_frame, n_frames, rng);
    std::vector<FrameRecord> frames(n_frames);
    const auto count = static_cast<std::ptrdiff_t>(n_frames);
    if constexpr (Parallel) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t i = 0; i < count; ++i) {
            frames[static_cast<std::size_t>(i)] =
                simulate_frame(cfg, k, first_frame + static_cast<std::uint64_t>(i),
                               delays[static_cast<std::size_t>(i)], rng);
        }
    } else {
        for (std::ptrdiff_t i = 0; i < count; ++i) {
            frames[static_cast<std::size_t>(i)] =
                simulate_frame(cfg, k, first_frame + static_cast<std::uint64_t>(i),
                               delays[static_cast<std::size_t>(i)], rng);
        }
    }
    return frames;
}

}  // namespace

std::vector<FrameRecord> simulate_block(const SimConfig& cfg, std::uint64_t first_frame,
                                        std::size_t n_frames, const RandomStream& rng) {
    return run_block<true>(cfg, first_frame, n_frames, rng);
}

std::vector<FrameRecord> simulate_block_serial(const SimConfig& cfg,
                                               std::uint64_t first_frame,
                                               std::size_t n_frames,
                                               const RandomStream& rng) {
    return run_block<false>(cfg, first_frame, n_frames, rng);
}

std::vector<double> estimate_transmittances(const std::vector<Series>& users,
                                            const Series& dealer, double eta) {
    if (!(eta > 0.0) || eta > 1.0) {
        throw std::invalid_argument("estimate_transmittances: eta must lie in (0, 1]");
    }
    std::vector<double> out;
    out.reserve(users.size());
    for (const Series& u : users) {
        const double var_x = mean_product(u.samples, Quad::X, u.samples, Quad::X);
        const double var_p = mean_product(u.samples, Quad::P, u.samples, Quad::P);
        if (var_x < 1e-12 || var_p < 1e-12) {
            throw DegenerateDataError("estimate_transmittances: vanishing modulation variance");
        }
        const double rx = mean_product(u.samples, Quad::X, dealer.samples, Quad::X) / var_x;
        const double rp = mean_product(u.samples, Quad::P, dealer.samples, Quad::P) / var_p;
        const double r = 0.5 * (rx + rp);
        out.push_back(2.0 * r * r / eta);
    }
    return out;
}

QuadPair dealer_subtract(QuadPair dealer, QuadPair u2, double t2) {
    return dealer_subtract(dealer, u2, t2, 1.0, SubtractMode::PlainSqrtT2);
}

QuadPair dealer_subtract(QuadPair dealer, QuadPair u2, double t2, double eta,
                         SubtractMode mode) {
    if (!(t2 > 0.0) || t2 > 1.0) {
        throw std::invalid_argument("dealer_subtract: t2 must lie in (0, 1]");
    }
    if (!(eta > 0.0) || eta > 1.0) {
        throw std::invalid_argument("dealer_subtract: eta must lie in (0, 1]");
    }
    const double c = mode == SubtractMode::MeasurementConsistent
        ? std::sqrt(eta * t2 / 2.0)
        : std::sqrt(t2);
    return {dealer.x - c * u2.x, dealer.p - c * u2.p};
}

}  // namespace lloqss
