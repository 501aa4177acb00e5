#pragma once

#include <cmath>
#include <cstdint>

namespace wmh {

// SplitMix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Order-sensitive combination of two words into a seed.
constexpr std::uint64_t mix64(std::uint64_t a, std::uint64_t b) {
    return mix64(mix64(a) ^ (b * 0xD6E8FEB86659FD93ull + 0x632BE59BD9B4E019ull));
}

// Seed of hash slot `slot` under a master seed.
constexpr std::uint64_t slot_seed(std::uint64_t master_seed, std::uint64_t slot) {
    return mix64(master_seed, slot);
}

// Key of the (slot, coordinate) stream used by Ioffe's sampler and by the
// probabilistic step of the weighted-to-unweighted reduction.
constexpr std::uint64_t stream_key(std::uint64_t master_seed, std::uint64_t slot, std::uint64_t coord) {
    return mix64(mix64(master_seed, slot), coord);
}

// Top 53 bits as a real in [0, 1).
constexpr double to_unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Uniform reals in [0, scale) whose successor state is a function of the
// previously drawn real. next_uniform() is pure: the chain only advances
// through reseed_from(), so a sequence depends on nothing but its first seed.
class ChainedRng {
public:
    static constexpr double kReseedFactor = 1e6;

    constexpr ChainedRng(std::uint64_t seed, double scale) : state_(seed), scale_(scale) {}

    double next_uniform() const {
        double r = scale_ * to_unit(mix64(state_));
        // scale * (1 - 2^-53) can round up to scale for non-power-of-two scales.
        return r < scale_ ? r : std::nextafter(scale_, 0.0);
    }

    // New chain state ceil(r * 10^6).
    ChainedRng reseed_from(double r) const {
        return ChainedRng(static_cast<std::uint64_t>(std::ceil(r * kReseedFactor)), scale_);
    }

    std::uint64_t state() const { return state_; }
    double scale() const { return scale_; }

private:
    std::uint64_t state_;
    double scale_;
};

// Counter-based stream keyed by an arbitrary 64-bit key.
class KeyedStream {
public:
    explicit constexpr KeyedStream(std::uint64_t key) : key_(key) {}

    std::uint64_t next_u64() {
        counter_ += 0x9E3779B97F4A7C15ull;
        return mix64(key_ ^ counter_);
    }

    // Uniform in the open interval (0, 1).
    double uniform_open() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

    // Gamma(2, 1) as the sum of two unit exponentials.
    double gamma21() { return -std::log(uniform_open()) - std::log(uniform_open()); }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

}  // namespace wmh
