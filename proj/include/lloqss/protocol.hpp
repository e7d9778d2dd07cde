#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "lloqss/noise.hpp"
#include "lloqss/quad.hpp"
#include "lloqss/rng.hpp"

namespace lloqss {

// Laser phases for one frame: "init" phases are redrawn every frame (fast
// drift of free-running lasers), "delay" phases carry across frames via a
// slow random walk.
struct PhaseState {
    double theta1_init = 0.0, theta2_init = 0.0, thetaD_init = 0.0;
    double theta1_delay = 0.0, theta2_delay = 0.0, thetaD_delay = 0.0;
};

// Fiber layout of the two-user chain:
// user 1 --(l1)--> user 2 --(l2)--> dealer.
struct ChannelGeometry {
    double alpha_db_per_km = 0.2;
    double l1_km = 25.0;
    double l2_km = 25.0;
    double span_km() const { return l1_km + l2_km; }
    double t1() const;  // over l1 + l2
    double t2() const;  // over l2
};

struct SimConfig {
    double v_mod1 = 4.0;
    double v_mod2 = 4.0;
    ChannelGeometry geom;
    DetectorParams det;
    double eps_sim = 0.0;    // injected channel excess noise, SNU
    double eps_ch = 0.002;   // channel term inside the reference-noise chi
    double ref_intensity = 2000.0;  // |alpha_R1|^2
    bool ref_noise = true;   // observe theta2R/thetaDR with Gaussian error
    double sigma_walk = 1e-5;       // delay-phase walk step, rad/frame
    bool freeze_fast_drift = false; // hold init phases at `start` every frame
    bool zero_detection_noise = false;  // diagnostics: drop detector noise
    PhaseState start;  // delay phases at frame 0 (init phases when frozen)
};

struct FrameRecord {
    QuadPair user1, user2;  // modulated plaintext quadratures
    QuadPair dealer;        // composite heterodyne measurement
    double theta2R = 0.0, thetaDR = 0.0;  // measured reference phases
    double phi1 = 0.0, phi2 = 0.0;        // true fast drifts (diagnostics)
};

// theta2R = (th1_init + th1_delay) - (th2_init + th2_delay), and likewise
// thetaDR against the dealer's laser. Noise-free; the simulator adds the
// measurement error on top.
std::pair<double, double> reference_phases(const PhaseState& s);

// phi1 = th1_init - thD_init, phi2 = th2_init - thD_init. These satisfy
// phi1 = thetaDR + (thD_delay - th1_delay) and
// phi2 = thetaDR - theta2R + (thD_delay - th2_delay).
std::pair<double, double> signal_drifts(const PhaseState& s);

// sqrt(eta*t1/2)*rotate(s1, phi1) + sqrt(eta*t2/2)*rotate(s2, phi2) + noise.
// Requires 0 < t1 <= t2 <= 1. Always consumes one gaussian pair.
QuadPair dealer_measure(QuadPair s1, QuadPair s2, double phi1, double phi2,
                        double t1, double t2, const DetectorParams& det,
                        double noise_variance, RandomStream& rng);

// Frames [first_frame, first_frame + n_frames) of the stream identified by
// rng's (seed, stream). Every frame consumes a fixed draw budget from its own
// substream, and the delay walk is accumulated from frame 0, so simulating
// [0,k) then [k,n) yields exactly the frames of one [0,n) call split in two,
// and the parallel and serial variants are bit-identical.
std::vector<FrameRecord> simulate_block(const SimConfig& cfg,
                                        std::uint64_t first_frame,
                                        std::size_t n_frames,
                                        const RandomStream& rng);
std::vector<FrameRecord> simulate_block_serial(const SimConfig& cfg,
                                               std::uint64_t first_frame,
                                               std::size_t n_frames,
                                               const RandomStream& rng);

// T_hat = 2 * mean(<x_u xD>/<x_u^2>, <p_u pD>/<p_u^2>)^2 / eta per user, on
// fully compensated series. Near-zero user variance throws
// DegenerateDataError.
std::vector<double> estimate_transmittances(const std::vector<Series>& users,
                                            const Series& dealer, double eta);

enum class SubtractMode {
    MeasurementConsistent,  // coefficient sqrt(eta*t2/2), matches dealer_measure
    PlainSqrtT2,            // coefficient sqrt(t2)
};

// Removes user 2's announced contribution from the dealer record:
// dealer - sqrt(t2) * u2. Requires t2 in (0, 1].
QuadPair dealer_subtract(QuadPair dealer, QuadPair u2, double t2);
// Same with a selectable coefficient convention.
QuadPair dealer_subtract(QuadPair dealer, QuadPair u2, double t2, double eta,
                         SubtractMode mode);

}  // namespace lloqss
