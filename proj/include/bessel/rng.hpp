#pragma once

#include <cstdint>
#include <limits>

namespace bessel {

/**
 * xoshiro256++ engine (Blackman/Vigna), seeded through SplitMix64 so that
 * (seed, stream_id) pairs give statistically independent streams. Satisfies
 * UniformRandomBitGenerator, so the std:: distributions run on top of it.
 *
 * Monte-Carlo drivers derive one engine per path index; estimates therefore
 * do not depend on worker count or scheduling, and are reproducible bit for
 * bit from (seed, stream_id).
 */
class Xoshiro256pp {
public:
    using result_type = std::uint64_t;

    explicit Xoshiro256pp(std::uint64_t seed = 0) {
        std::uint64_t sm = seed;
        for (auto& word : s_) word = splitmix64(sm);
    }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<std::uint64_t>::max(); }

    result_type operator()() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    static std::uint64_t splitmix64(std::uint64_t& state) {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::uint64_t s_[4];
};

/**
 * Sub-seed for an independent channel (one verification item, one sweep
 * leg) under a master seed, so that items never share path streams no
 * matter how many paths each draws.
 */
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t channel) {
    std::uint64_t mix = seed ^ (0xd1342543de82ef95ull * (channel + 0x632be59bd9b4e019ull));
    std::uint64_t out = Xoshiro256pp::splitmix64(mix);
    return out ^ Xoshiro256pp::splitmix64(mix);
}

/** Engine for path/stream `stream_id` under master seed `seed`. */
inline Xoshiro256pp make_stream_rng(std::uint64_t seed, std::uint64_t stream_id) {
    std::uint64_t mix = seed;
    std::uint64_t a = Xoshiro256pp::splitmix64(mix);
    mix ^= 0x6a09e667f3bcc909ull + stream_id + (mix << 6) + (mix >> 2);
    std::uint64_t b = Xoshiro256pp::splitmix64(mix);
    return Xoshiro256pp(a ^ (b * 0x100000001b3ull) ^ stream_id);
}

} // namespace bessel
