#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace dgcc {

// SplitMix64 finalizer; used to hash stream coordinates into seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> coords) noexcept {
    std::uint64_t h = mix64(base);
    for (auto c : coords) h = mix64(h ^ mix64(c + 0x632BE59BD9B4E019ULL));
    return h;
}

// Stream tags. Every random draw in a run comes from a stream keyed by
// (run seed, tag, coordinates...), so results do not depend on call order
// across components.
enum class StreamTag : std::uint64_t {
    init = 1,
    select = 2,
    crossover = 3,
    mutate = 4,
    adjust = 5,
    reinit = 6,
    reference = 7,
    generator = 8,
};

// xoshiro256** seeded through SplitMix64; cheap enough to construct one per
// offspring.
class Xoshiro256 {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256(std::uint64_t seed) noexcept {
        for (auto& word : s_) {
            seed += 0x9E3779B97F4A7C15ULL;
            std::uint64_t z = seed;
            z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
            z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
            word = z ^ (z >> 31);
        }
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept { return ~result_type{0}; }

    result_type operator()() noexcept {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }

    std::uint64_t s_[4];
};

class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    RandomStream(std::uint64_t base, StreamTag tag, std::initializer_list<std::uint64_t> coords)
        : engine_(derive_seed(derive_seed(base, {static_cast<std::uint64_t>(tag)}), coords)) {}

    // Uniform integer in [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
    }

    std::size_t index(std::size_t n) {
        return static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(n) - 1));
    }

    // Uniform real in [lo, hi).
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }

    bool bernoulli(double p) {
        if (p <= 0.0) return false;
        if (p >= 1.0) return true;
        return uniform(0.0, 1.0) < p;
    }

    Xoshiro256& engine() noexcept { return engine_; }

private:
    Xoshiro256 engine_;
};

} // namespace dgcc
