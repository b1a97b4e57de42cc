#pragma once

#include <cmath>
#include <cstdint>

namespace parrep {

// Counter-based stream built on the SplitMix64 finalizer.  Every draw is a
// pure function of (seed, key, counter), so a stream can be replayed from any
// position and two streams with different keys are statistically independent.
// This is what makes the simulation bit-reproducible under any thread count.

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

enum class Phase : std::uint32_t {
    Serial = 0,
    Decorrelate = 1,
    Dephase = 2,
    Parallel = 3,
    Resample = 4,
};

struct StreamKey {
    std::uint32_t replica = 0;
    Phase phase = Phase::Serial;
    std::uint64_t cycle = 0;
    std::uint32_t purpose = 0;
};

class RngStream {
public:
    RngStream(std::uint64_t seed, const StreamKey& key) {
        std::uint64_t s = mix64(seed + kGolden);
        s = mix64(s + key.replica);
        s = mix64(s + static_cast<std::uint64_t>(key.phase));
        s = mix64(s + key.cycle);
        s = mix64(s + key.purpose);
        base_ = s;
    }

    std::uint64_t bits_at(std::uint64_t counter) const {
        return mix64(base_ + (counter + 1) * kGolden);
    }

    /// Uniform draw in [0, 1) at an explicit counter position.
    double uniform_at(std::uint64_t counter) const {
        return static_cast<double>(bits_at(counter) >> 11) * 0x1.0p-53;
    }

    double uniform() { return uniform_at(counter_++); }

    /// Exponential holding time; maps uniform 0 to holding time 0.
    double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

    std::uint64_t counter() const { return counter_; }
    void seek(std::uint64_t counter) { counter_ = counter; }

private:
    std::uint64_t base_ = 0;
    std::uint64_t counter_ = 0;
};

/// Per-trajectory seed derivation for independent experiment repetitions.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t trajectory_index) {
    return mix64(mix64(seed + kGolden) + trajectory_index);
}

}  // namespace parrep
