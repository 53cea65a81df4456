#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace zlab {

using cplx = std::complex<double>;

// x mod 2 pi in long double, so that tau * log p with tau ~ 1e7 keeps
// ~1e-12 absolute phase accuracy.
inline double reduce_2pi(long double x) {
    constexpr long double two_pi = 2.0L * std::numbers::pi_v<long double>;
    long double r = std::fmod(x, two_pi);
    if (r > std::numbers::pi_v<long double>) r -= two_pi;
    if (r < -std::numbers::pi_v<long double>) r += two_pi;
    return static_cast<double>(r);
}

// n^{-s} for integer n >= 1.
inline cplx int_pow_minus(std::uint64_t n, cplx s) {
    if (n == 1) return {1.0, 0.0};
    const long double ln = std::log(static_cast<long double>(n));
    const double mag = static_cast<double>(std::exp(-static_cast<long double>(s.real()) * ln));
    const double ph = reduce_2pi(-static_cast<long double>(s.imag()) * ln);
    return std::polar(mag, ph);
}

// n^{-(sigma + i t)} with t carried in long double, so that tau + h keeps
// its low bits when tau is large.
inline cplx int_pow_minus(std::uint64_t n, double sigma, long double t) {
    if (n == 1) return {1.0, 0.0};
    const long double ln = std::log(static_cast<long double>(n));
    const double mag = static_cast<double>(std::exp(-static_cast<long double>(sigma) * ln));
    return std::polar(mag, reduce_2pi(-t * ln));
}

// exp(-i t log n)
inline cplx unit_phase(std::uint64_t n, double t) {
    const double ph = reduce_2pi(-static_cast<long double>(t) * std::log(static_cast<long double>(n)));
    return {std::cos(ph), std::sin(ph)};
}

}  // namespace zlab
