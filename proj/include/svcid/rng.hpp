#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>

namespace svcid {

/// splitmix64 step; used to whiten seeds before they reach an engine.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

/// Seed of the substream identified by `key` under a base seed.
///
/// Every randomized entity (raw sequence, data point, shuffle, ...) draws
/// from its own substream keyed by its id, so removing or reordering
/// entities never changes any other entity's draws.
inline std::uint64_t substream_seed(std::uint64_t base, std::uint64_t key) {
    std::uint64_t s = base ^ (key * 0x9E3779B97F4A7C15ull);
    std::uint64_t first = splitmix64(s);
    return first ^ splitmix64(s);
}

/// Deterministic random stream with hand-rolled distributions.
///
/// std::mt19937_64 output is pinned by the standard but the std::*
/// distributions are not; the draw algorithms here are fixed so that a given
/// (seed, draw sequence) yields identical values on any conforming
/// implementation.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform01() < p; }

    /// Uniform in {0, ..., n-1}; modulo-rejection, no bias.
    std::uint64_t uniform_below(std::uint64_t n) {
        if (n == 0) {
            throw std::invalid_argument("RandomStream::uniform_below: n must be > 0");
        }
        const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
        const std::uint64_t rem = (max % n + 1) % n;  // 2^64 mod n
        std::uint64_t v = next_u64();
        if (rem != 0) {
            const std::uint64_t threshold = max - rem + 1;  // largest multiple of n
            while (v >= threshold) {
                v = next_u64();
            }
        }
        return v % n;
    }

    /// Uniform integer in [lo, hi], inclusive.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        if (lo > hi) {
            throw std::invalid_argument("RandomStream::uniform_int: empty range");
        }
        const std::uint64_t span =
            static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
        return lo + static_cast<std::int64_t>(uniform_below(span));
    }

    /// Standard normal via Box-Muller; draws exactly two uniforms.
    double normal() {
        double u1 = uniform01();
        while (u1 == 0.0) {
            u1 = uniform01();
        }
        const double u2 = uniform01();
        const double two_pi = 6.283185307179586476925286766559;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

private:
    std::mt19937_64 engine_;
};

/// Stream for entity `key` under `base` seed.
inline RandomStream substream(std::uint64_t base, std::uint64_t key) {
    return RandomStream(substream_seed(base, key));
}

}  // namespace svcid
