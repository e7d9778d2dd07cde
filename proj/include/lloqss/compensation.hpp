#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lloqss/protocol.hpp"
#include "lloqss/quad.hpp"

namespace lloqss {

// Stage one: undo a measured reference phase, rotate(data, -theta_ref).
// Applied per frame to user 2 and to the dealer; never to user 1.
QuadPair first_rotation(QuadPair data, double theta_ref);

// Stage two: apply a block-level cumulative-phase estimate,
// rotate(data, +dtheta_hat). Applied to users 1 and 2; never to the dealer.
QuadPair second_rotation(QuadPair data, double dtheta_hat);

// atan2(<user_p * dealer_x>, <user_x * dealer_x>). Throws
// IndeterminateAngleError when both correlations sit below a five-sigma
// floor derived from their own sample spread.
double estimate_cumulative_phase(std::span<const double> user_x,
                                 std::span<const double> user_p,
                                 std::span<const double> dealer_x);

struct CompensationEstimate {
    double dtheta_d1 = 0.0;  // dealer-minus-user-1 cumulative phase
    double dtheta_d2 = 0.0;  // dealer-minus-user-2 cumulative phase
    std::size_t n_samples = 0;
    double v_slow = 0.0;     // block-to-block estimate variance, rad^2
};

enum class Stage { First, Second };
enum class Party { User1, User2, Dealer };

// Which stages touched which party's data; lets tests assert the
// stage-separation contract instead of trusting it.
struct MutationLog {
    std::vector<std::pair<Stage, Party>> events;
    bool contains(Stage stage, Party party) const;
};

struct CompensatedBlock {
    Series user1, user2, dealer;  // fully compensated key-frame series
    CompensationEstimate estimate;
    MutationLog log;
};

// Full pipeline: stage one on every frame, phase estimates from the
// (disclosed) estimation frames, stage two on the key frames. The two frame
// sets must be disjoint; the estimation frames are consumed here and do not
// appear in the output series.
CompensatedBlock compensate_block(const std::vector<FrameRecord>& estimation,
                                  const std::vector<FrameRecord>& key,
                                  std::uint64_t key_first_frame = 0);

// Empirical variance of successive estimate differences (angles wrapped to
// (-pi, pi]); 0 when fewer than two estimates are given.
double block_to_block_variance(std::span<const double> estimates);

// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

}  // namespace lloqss
