#pragma once

// SplitMix64 (Steele, Lea & Flood 2014) used as a counter-based generator:
// output n of a stream is mix(seed + (n + 1) * gamma). Streams for parallel
// trials are derived as derive_seed(seed, index), so every trial draws from an
// independent, schedule-free stream. Normal variates use Box-Muller so the
// sequence is identical on every platform (std::normal_distribution is not).

#include <cstdint>

#include "kframe/hilbert.hpp"

namespace kframe {

inline constexpr std::uint64_t kSplitMixGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t splitmix_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Stream seed for sub-stream `index` of `seed`.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    return splitmix_mix(seed ^ splitmix_mix(index + kSplitMixGamma));
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed) {}

    std::uint64_t next_u64() {
        ++counter_;
        return splitmix_mix(seed_ + counter_ * kSplitMixGamma);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [lo, hi].
    std::size_t uniform_index(std::size_t lo, std::size_t hi);

    double normal();
    /// Circularly-symmetric complex Gaussian with E|z|^2 = 1.
    Scalar complex_normal();

    Matrix complex_gaussian(std::size_t rows, std::size_t cols);
    Vector complex_gaussian(std::size_t n);

    /// Fork an independent stream.
    Rng fork(std::uint64_t index) const { return Rng(derive_seed(seed_, index)); }

private:
    std::uint64_t seed_;
    std::uint64_t counter_ = 0;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

/// Haar-distributed random unitary (QR of a complex Gaussian with phase fix).
Matrix random_unitary(std::size_t n, Rng& rng);

/// Random rows x cols complex matrix of exact rank r (product of Gaussians).
Matrix random_rank_matrix(std::size_t rows, std::size_t cols, std::size_t r, Rng& rng);

} // namespace kframe
