#pragma once

#include <cstdint>

namespace asnn {

// SplitMix64 (Vigna's public-domain reference). The fixed state transition
// keeps seeded corpora byte-identical across platforms and standard
// libraries, unlike std::uniform_* distributions.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Unbiased integer in [0, n) via rejection sampling.
    std::uint64_t bounded(std::uint64_t n) {
        const std::uint64_t threshold = (0 - n) % n;
        for (;;) {
            const std::uint64_t r = next();
            if (r >= threshold) return r % n;
        }
    }

    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    float uniform(float lo, float hi) {
        return static_cast<float>(lo + uniform01() * (static_cast<double>(hi) - lo));
    }

private:
    std::uint64_t state_;
};

} // namespace asnn
