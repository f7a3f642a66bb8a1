#pragma once

#include <cstdint>

namespace abandon {

// Splittable counter-based random stream built on the SplitMix64 mixer.
// A stream is identified by its base seed alone. child(i) derives an
// independent substream from (base seed, i) and nothing else, so the order
// in which substreams are created or consumed never changes their output.
// That is what makes experiment results reproducible across thread counts.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : base_(seed), state_(seed) {}

    // Independent substream for index i. Depends only on the base seed,
    // not on how much of this stream has already been consumed.
    RngStream child(std::uint64_t i) const {
        return RngStream(mix(base_ + (i + 1) * kGolden));
    }

    std::uint64_t next_u64() {
        state_ += kGolden;
        return mix(state_);
    }

    // Uniform on [0, 1), 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    std::uint64_t base_seed() const { return base_; }

private:
    static constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t base_;
    std::uint64_t state_;
};

}  // namespace abandon
