#pragma once

#include <cstdint>
#include <vector>

#include "zlab/primes.hpp"

namespace zt {

// Shared sieve, built once per test binary.
inline const zlab::PrimeTable& table(std::uint64_t limit = 100'000'000) {
    static const zlab::PrimeTable t = zlab::sieve_primes(limit);
    if (t.limit < limit) throw std::runtime_error("fixture table too small");
    return t;
}

// Independent oracle: plain odd-only Eratosthenes, no segmentation.
inline std::vector<bool> composite_oracle(std::uint64_t n) {
    std::vector<bool> c(n + 1, false);
    c[0] = true;
    if (n >= 1) c[1] = true;
    for (std::uint64_t i = 4; i <= n; i += 2) c[i] = true;
    for (std::uint64_t i = 3; i * i <= n; i += 2)
        if (!c[i])
            for (std::uint64_t j = i * i; j <= n; j += 2 * i) c[j] = true;
    return c;
}

inline bool is_prime_trial(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace zt
