#include "lloqss/quad.hpp"

#include <cmath>
#include <stdexcept>

namespace lloqss {

QuadPair rotate(QuadPair v, double phi) {
    if (!std::isfinite(v.x) || !std::isfinite(v.p) || !std::isfinite(phi)) {
        throw std::invalid_argument("rotate: non-finite input");
    }
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    return {v.x * c + v.p * s, -v.x * s + v.p * c};
}

QuadPair sample_gaussian_pair(double variance, RandomStream& rng) {
    if (!(variance >= 0.0)) {
        throw std::invalid_argument("sample_gaussian_pair: negative variance");
    }
    const auto g = rng.gaussian_pair(variance);
    return {g[0], g[1]};
}

namespace {

// Fixed chunk size keeps partial sums independent of scheduling, so the
// combine step below reproduces the same bits for any thread count.
constexpr std::size_t kChunk = 4096;

template <typename Get>
double chunked_mean(std::size_t n, Get get) {
    const std::size_t nchunks = (n + kChunk - 1) / kChunk;
    std::vector<double> partial(nchunks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(nchunks); ++c) {
        const std::size_t lo = static_cast<std::size_t>(c) * kChunk;
        const std::size_t hi = lo + kChunk < n ? lo + kChunk : n;
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += get(i);
        partial[static_cast<std::size_t>(c)] = s;
    }
    double total = 0.0;
    for (double s : partial) total += s;
    return total / static_cast<double>(n);
}

void check_lengths(std::size_t na, std::size_t nb) {
    if (na == 0 || nb == 0) throw std::invalid_argument("mean_product: empty input");
    if (na != nb) throw std::invalid_argument("mean_product: length mismatch");
}

}  // namespace

double mean_product(std::span<const double> a, std::span<const double> b) {
    check_lengths(a.size(), b.size());
    return chunked_mean(a.size(), [&](std::size_t i) { return a[i] * b[i]; });
}

double mean_product(std::span<const QuadPair> a, Quad ca,
                    std::span<const QuadPair> b, Quad cb) {
    check_lengths(a.size(), b.size());
    if (ca == Quad::X && cb == Quad::X) {
        return chunked_mean(a.size(), [&](std::size_t i) { return a[i].x * b[i].x; });
    }
    if (ca == Quad::P && cb == Quad::X) {
        return chunked_mean(a.size(), [&](std::size_t i) { return a[i].p * b[i].x; });
    }
    if (ca == Quad::X && cb == Quad::P) {
        return chunked_mean(a.size(), [&](std::size_t i) { return a[i].x * b[i].p; });
    }
    return chunked_mean(a.size(), [&](std::size_t i) { return a[i].p * b[i].p; });
}

double mean_product_serial(std::span<const double> a, std::span<const double> b) {
    check_lengths(a.size(), b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s / static_cast<double>(a.size());
}

double mean_product_serial(std::span<const QuadPair> a, Quad ca,
                           std::span<const QuadPair> b, Quad cb) {
    check_lengths(a.size(), b.size());
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += component(a[i], ca) * component(b[i], cb);
    return s / static_cast<double>(a.size());
}

}  // namespace lloqss
