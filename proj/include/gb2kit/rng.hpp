#pragma once

#include <cstdint>

namespace gb2kit::rng {

// SplitMix64 step; used directly and to seed the main engine.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// xoshiro256++ (Blackman & Vigna). Chosen over std::mt19937_64 so streams are
// bit-identical across standard library implementations.
class Engine {
public:
    explicit Engine(std::uint64_t seed) {
        std::uint64_t s = seed;
        for (auto& w : state_) w = splitmix64(s);
    }

    std::uint64_t next() {
        const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // Uniform double in the open interval (0, 1).
    double uniform01() {
        return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4];
};

// Seed for stream `index` derived from a master seed; documented so parallel
// replications can be reproduced outside this library.
inline std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index) {
    std::uint64_t s = master;
    std::uint64_t base = splitmix64(s);
    std::uint64_t mix = base ^ (0xA0761D6478BD642FULL * (index + 1));
    return splitmix64(mix);
}

}  // namespace gb2kit::rng
