#include "lloqss/compensation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "lloqss/errors.hpp"

namespace lloqss {

QuadPair first_rotation(QuadPair data, double theta_ref) {
    return rotate(data, -theta_ref);
}

QuadPair second_rotation(QuadPair data, double dtheta_hat) {
    return rotate(data, dtheta_hat);
}

namespace {

struct Correlation {
    double mean = 0.0;
    double sigma = 0.0;  // standard error of the mean
};

Correlation correlate(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    double mean = mean_product(a, b);
    double var = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a[i] * b[i] - mean;
        var += d * d;
    }
    var /= static_cast<double>(n);
    return {mean, std::sqrt(var / static_cast<double>(n))};
}

bool dead(const Correlation& c) {
    if (c.sigma == 0.0) return c.mean == 0.0;
    return std::fabs(c.mean) < 5.0 * c.sigma;
}

}  // namespace

double estimate_cumulative_phase(std::span<const double> user_x,
                                 std::span<const double> user_p,
                                 std::span<const double> dealer_x) {
    if (user_x.empty())
        throw std::invalid_argument("estimate_cumulative_phase: empty input");
    if (user_x.size() != user_p.size() || user_x.size() != dealer_x.size())
        throw std::invalid_argument("estimate_cumulative_phase: length mismatch");
    const Correlation cosc = correlate(user_x, dealer_x);
    const Correlation sinc = correlate(user_p, dealer_x);
    if (dead(cosc) && dead(sinc))
        throw IndeterminateAngleError(
            "estimate_cumulative_phase: correlations indistinguishable from noise");
    return std::atan2(sinc.mean, cosc.mean);
}

bool MutationLog::contains(Stage stage, Party party) const {
    return std::find(events.begin(), events.end(),
                     std::make_pair(stage, party)) != events.end();
}

double wrap_angle(double a) { return std::atan2(std::sin(a), std::cos(a)); }

namespace {

// Stage one applied to one frame: user 2 and dealer rotate by their
// respective measured reference phases; user 1 passes through.
struct StageOneFrame {
    QuadPair user1, user2, dealer;
};

StageOneFrame stage_one(const FrameRecord& f) {
    return {f.user1, first_rotation(f.user2, f.theta2R),
            first_rotation(f.dealer, f.thetaDR)};
}

}  // namespace

CompensatedBlock compensate_block(const std::vector<FrameRecord>& estimation,
                                  const std::vector<FrameRecord>& key,
                                  std::uint64_t key_first_frame) {
    if (estimation.empty())
        throw std::invalid_argument("compensate_block: no estimation frames");
    if (key.empty())
        throw std::invalid_argument("compensate_block: no key frames");

    const std::size_t ne = estimation.size();
    std::vector<double> x1(ne), p1(ne), x2(ne), p2(ne), xd(ne);
    for (std::size_t i = 0; i < ne; ++i) {
        const StageOneFrame s = stage_one(estimation[i]);
        x1[i] = s.user1.x;
        p1[i] = s.user1.p;
        x2[i] = s.user2.x;
        p2[i] = s.user2.p;
        xd[i] = s.dealer.x;
    }

    CompensationEstimate est;
    est.dtheta_d1 = estimate_cumulative_phase(x1, p1, xd);
    est.dtheta_d2 = estimate_cumulative_phase(x2, p2, xd);
    est.n_samples = ne;

    CompensatedBlock out;
    out.estimate = est;
    out.log.events = {{Stage::First, Party::User2},
                      {Stage::First, Party::Dealer},
                      {Stage::Second, Party::User1},
                      {Stage::Second, Party::User2}};

    const std::size_t nk = key.size();
    out.user1.samples.resize(nk);
    out.user2.samples.resize(nk);
    out.dealer.samples.resize(nk);
    out.user1.first_frame = key_first_frame;
    out.user2.first_frame = key_first_frame;
    out.dealer.first_frame = key_first_frame;
    for (std::size_t i = 0; i < nk; ++i) {
        const StageOneFrame s = stage_one(key[i]);
        out.user1.samples[i] = second_rotation(s.user1, est.dtheta_d1);
        out.user2.samples[i] = second_rotation(s.user2, est.dtheta_d2);
        out.dealer.samples[i] = s.dealer;
    }
    return out;
}

double block_to_block_variance(std::span<const double> estimates) {
    if (estimates.size() < 2) return 0.0;
    const std::size_t n = estimates.size() - 1;
    std::vector<double> diffs(n);
    for (std::size_t i = 0; i < n; ++i)
        diffs[i] = wrap_angle(estimates[i + 1] - estimates[i]);
    double mean = 0.0;
    for (double d : diffs) mean += d;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double d : diffs) var += (d - mean) * (d - mean);
    return var / static_cast<double>(n);
}

}  // namespace lloqss
