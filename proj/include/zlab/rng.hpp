#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace zlab {

// SplitMix64 output function (Steele, Lea, Flood). Bijective on u64.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// xoshiro256++ (Blackman, Vigna). Satisfies UniformRandomBitGenerator.
class Xoshiro256pp {
public:
    using result_type = std::uint64_t;
    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    Xoshiro256pp() = default;
    explicit Xoshiro256pp(const std::array<std::uint64_t, 4>& s) : s_(s) {}

    result_type operator()() {
        const std::uint64_t r = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return r;
    }

    // [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
    // N(0,1) by Box-Muller; the second variate is cached.
    double normal();

    const std::array<std::uint64_t, 4>& state() const { return s_; }
    void set_state(const std::array<std::uint64_t, 4>& s) { s_ = s; }

    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

private:
    std::array<std::uint64_t, 4> s_{1, 2, 3, 4};
    double cached_ = 0.0;
    bool has_cached_ = false;
};

// Counter-based stream derivation. The algorithm, so that other
// implementations can reproduce every stream bit for bit:
//
//   x    = mix64(seed) XOR mix64(index + 0xD1B54A32D192ED03)
//   s[i] = mix64(x + i * 0x9E3779B97F4A7C15)     for i = 0..3
//
// i.e. four SplitMix64 outputs starting from state x. mix64 is a bijection,
// so for a fixed seed distinct indices give distinct x and distinct s[0].
Xoshiro256pp seed_stream(std::uint64_t seed, std::uint64_t index);

}  // namespace zlab
