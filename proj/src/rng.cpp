#include "zlab/rng.hpp"

#include <cmath>
#include <numbers>

namespace zlab {

double Xoshiro256pp::normal() {
    if (has_cached_) {
        has_cached_ = false;
        return cached_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(a);
    has_cached_ = true;
    return r * std::cos(a);
}

Xoshiro256pp seed_stream(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t x = mix64(seed) ^ mix64(index + 0xD1B54A32D192ED03ull);
    std::array<std::uint64_t, 4> s{};
    for (std::uint64_t i = 0; i < 4; ++i) s[i] = mix64(x + i * 0x9E3779B97F4A7C15ull);
    if ((s[0] | s[1] | s[2] | s[3]) == 0) s[0] = 1;
    return Xoshiro256pp(s);
}

}  // namespace zlab
