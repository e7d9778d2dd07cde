#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace lloqss {

// Counter-based random stream (Philox4x32-10).
//
// A stream is addressed by (seed, stream id, frame); identical addresses
// reproduce identical draws bit-exactly, independent of thread count or of
// how draws are batched. Per-frame substreams therefore allow frame loops to
// run in parallel while replaying exactly like a serial loop.
//
// Block layout: key = seed (2x32), counter = (block, frame_lo, frame_hi,
// stream). Each block yields four 32-bit words, served as two 64-bit draws.
// A single stream instance must not be drawn from concurrently.
class RandomStream {
  public:
    RandomStream(std::uint64_t seed, std::uint32_t stream)
        : seed_(seed), stream_(stream), frame_(0) {}

    std::uint64_t seed() const { return seed_; }
    std::uint32_t stream() const { return stream_; }
    std::uint64_t frame() const { return frame_; }

    // Same (seed, stream) repositioned at a frame, draw counter reset.
    RandomStream at_frame(std::uint64_t frame) const {
        RandomStream s(seed_, stream_);
        s.frame_ = frame;
        return s;
    }

    std::uint64_t next_u64() {
        if (half_ == 0) {
            block_ = philox(counter_++);
            half_ = 2;
        }
        --half_;
        const int base = half_ ? 0 : 2;
        return (static_cast<std::uint64_t>(block_[base + 1]) << 32) | block_[base];
    }

    // Uniform on [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform angle on [0, 2*pi).
    double uniform_angle() { return 6.283185307179586476925286766559 * uniform(); }

    // One pair of independent N(0, variance) draws (Box-Muller; consumes two
    // 64-bit draws, so consumption is fixed and replayable).
    std::array<double, 2> gaussian_pair(double variance) {
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log1p(-u1) * variance);
        const double a = 6.283185307179586476925286766559 * u2;
        return {r * std::cos(a), r * std::sin(a)};
    }

    // Single N(0, variance) draw; consumes a full pair to keep the layout fixed.
    double gaussian(double variance) { return gaussian_pair(variance)[0]; }

    // Raw Philox4x32-10 block (exposed for the known-answer tests).
    static std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                                   std::array<std::uint32_t, 2> key) {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t p0 = 0xD2511F53ull * ctr[0];
            const std::uint64_t p1 = 0xCD9E8D57ull * ctr[2];
            const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
            const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
            const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
            const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
            ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
            key[0] += 0x9E3779B9u;
            key[1] += 0xBB67AE85u;
        }
        return ctr;
    }

  private:
    std::array<std::uint32_t, 4> philox(std::uint32_t block) const {
        return philox4x32({block,
                           static_cast<std::uint32_t>(frame_),
                           static_cast<std::uint32_t>(frame_ >> 32),
                           stream_},
                          {static_cast<std::uint32_t>(seed_),
                           static_cast<std::uint32_t>(seed_ >> 32)});
    }

    std::uint64_t seed_;
    std::uint32_t stream_;
    std::uint64_t frame_;
    std::uint32_t counter_ = 0;
    std::array<std::uint32_t, 4> block_{};
    int half_ = 0;
};

}  // namespace lloqss
