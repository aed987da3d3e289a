#pragma once

#include <cstdint>

namespace ecsim {

// splitmix64 finalizer. Bijective on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// splitmix64 generator: each output is a hash of an additive counter, so two
// streams with distinct starting states share no internal state and can be
// advanced in any interleaving without affecting each other.
class RandomStream {
public:
    RandomStream() = default;
    explicit constexpr RandomStream(std::uint64_t state) noexcept : state_(state) {}

    constexpr std::uint64_t next() noexcept {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix64(state_);
    }

    // Uniform on [0, 1), 53 significant bits.
    double uniform01() noexcept {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    // Uniform on [lo, hi]; returns exactly lo when the interval is degenerate.
    double uniform(double lo, double hi) noexcept {
        return lo + uniform01() * (hi - lo);
    }

    // One draw is consumed even for the degenerate parameters p <= 0 and
    // p >= 1, keeping stream positions independent of the outcome.
    bool bernoulli(double p) noexcept {
        return uniform01() < p;
    }

private:
    std::uint64_t state_ = 0;
};

// Stream families hanging off one master seed. Agent streams are keyed by
// (family, index); population sampling has its own family so that sampling
// draws never shift the agents' simulation randomness.
enum class StreamFamily : std::uint64_t {
    solar_agent = 1,
    wind_agent = 2,
    consumer_agent = 3,
    population = 4,
};

inline RandomStream derive_stream(std::uint64_t seed, StreamFamily family,
                                  std::uint64_t index = 0) noexcept {
    std::uint64_t h = mix64(seed ^ 0xA0761D6478BD642FULL);
    h = mix64(h ^ static_cast<std::uint64_t>(family) * 0xE7037ED1A0B428DBULL);
    h = mix64(h ^ (index + 1) * 0x8EBC6AF09C88C6E3ULL);
    return RandomStream(h);
}

} // namespace ecsim
