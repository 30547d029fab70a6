#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace poseaug {

/**
 * Seeded generator whose draws are identical across standard libraries.
 *
 * std::mt19937_64 output is fully specified, but the std distributions are not, so the
 * real and integer draws are computed here directly from the raw 64-bit stream.
 */
class Rng
{
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1) with 53 bits of resolution.
    double canonical() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform on [lo, hi]; the upper bound is reachable only through rounding.
    double uniform(double lo, double hi) { return lo + (hi - lo) * canonical(); }

    /// Uniform integer on [lo, hi] inclusive, unbiased.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    bool bernoulli(double p) { return canonical() < p; }

private:
    std::mt19937_64 engine_;
};

/// SplitMix64 finaliser.
std::uint64_t mix64(std::uint64_t x);

/// Per-item seed from a global seed and a stable item id; independent of processing order.
std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view item_id);

} // namespace poseaug
