#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lloqss/rng.hpp"

namespace lloqss {

// One measured or modulated quadrature pair, shot-noise units (vacuum = 1).
struct QuadPair {
    double x = 0.0;
    double p = 0.0;
};

enum class Quad { X, P };

inline double component(const QuadPair& q, Quad c) { return c == Quad::X ? q.x : q.p; }

// Ordered sample run tagged with the index of its first frame.
struct Series {
    std::vector<QuadPair> samples;
    std::uint64_t first_frame = 0;
};

// Rotation by phi:
//   x' =  x cos(phi) + p sin(phi)
//   p' = -x sin(phi) + p cos(phi)
// Throws std::invalid_argument on non-finite input.
QuadPair rotate(QuadPair v, double phi);

// Independent zero-mean normal draws for both quadratures. Always consumes
// exactly one gaussian pair from the stream. Negative variance throws
// std::invalid_argument.
QuadPair sample_gaussian_pair(double variance, RandomStream& rng);

// Empirical mean of elementwise products of two equal-length component runs.
// Summation is chunked in fixed-size blocks combined in index order, so the
// result is bit-identical for any thread count. Throws std::invalid_argument
// on empty or length-mismatched input.
double mean_product(std::span<const double> a, std::span<const double> b);
double mean_product(std::span<const QuadPair> a, Quad ca,
                    std::span<const QuadPair> b, Quad cb);

// Plain left-to-right reference summation, kept for kernel validation.
double mean_product_serial(std::span<const double> a, std::span<const double> b);
double mean_product_serial(std::span<const QuadPair> a, Quad ca,
                           std::span<const QuadPair> b, Quad cb);

}  // namespace lloqss
