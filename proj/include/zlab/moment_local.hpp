#pragma once

#include <array>
#include <cstdint>
#include <ostream>
#include <vector>

#include "zlab/numeric.hpp"
#include "zlab/primes.hpp"

namespace zlab {

struct ShiftVector {
    std::array<cplx, 4> z{};
    // (z3, z4, z1, z2)
    ShiftVector permuted() const { return {{z[2], z[3], z[0], z[1]}}; }
    bool is_zero(double eps = 0.0) const;
    double l1() const;
};

// sum_{a+b=alpha} p^{-a z - b w}
cplx sigma_zw(std::uint64_t p, int alpha, cplx z, cplx w);

// B_z(p^alpha): the ratio of sum_j sigma_{z1,z2}(p^{alpha+j}) sigma_{z3,z4}(p^j) p^{-j}
// to the alpha = 0 series. J = 0 picks the truncation so the tail is < 1e-14.
cplx B_series(std::uint64_t p, int alpha, const ShiftVector& z, int J = 0);

// The rational-exponential closed form in its literal displayed arrangement.
// It equals the series with the alpha-shift on the (z3, z4) pair,
// i.e. B_display(z) = B_series(pi z).
cplx B_display(std::uint64_t p, int alpha, const ShiftVector& z);
// Closed form in the series convention: B_display(pi z). Coincident
// z-arguments in the denominator go through a Richardson limit.
cplx B_closed(std::uint64_t p, int alpha, const ShiftVector& z);
// (1 - p^-2)^-1 (1 + alpha - 2 alpha/p + (alpha - 1)/p^2)
double B_zero(std::uint64_t p, int alpha);

// f(1) = 1, f(p) = -2, f(p^2) = 1, f(p^a) = 0 for a >= 3.
int f_mult(int k);

// The local factor P_{z, pi z}(c1, c2, p) from valuations v1 = v_p(c1), v2 = v_p(c2).
cplx local_factor(std::uint64_t p, int v1, int v2, const ShiftVector& z);

// Euler product over primes in I, accumulated in log space.
struct LogValue {
    double log_abs = 0.0;  // -inf for an exact zero
    double arg = 0.0;      // summed phase (not reduced)
    cplx value() const;
};

struct Factored {
    std::vector<std::pair<std::uint64_t, int>> pv;  // (p, v_p)
    int v(std::uint64_t p) const;
};
Factored factor(std::uint64_t c);

// Blocks of kFrakBlock primes are summed independently and reduced in block
// order, so the result does not depend on `workers`.
inline constexpr std::size_t kFrakBlock = 4096;
LogValue frak_S(const PrimeTable& t, PrimeRange I, std::uint64_t c1, std::uint64_t c2, const ShiftVector& z,
                unsigned workers = 1);

// Right side of the estimate for |S_I(c1, c2)| with the giant constants
// replaced by calibration constants:
//   prod_p (1 - 4/p + K_eps (log p / (p e^n) + 1/p^2)) h(c1') h(c2') / (r c1' c2'),
//   h(p^a) = K_h a^2 log p / e^n.
double frak_S_bound_log(const PrimeTable& t, PrimeRange I, std::uint64_t c1, std::uint64_t c2, double n,
                        double K_eps, double K_h);

struct IdentityRow {
    std::uint64_t p;
    int alpha;
    double z_norm;
    double residual;
};
void write_identity_csv(std::ostream& os, const std::vector<IdentityRow>& rows);

// d_3(p^alpha) = (alpha+1)(alpha+2)/2
double d3_prime_power(int alpha);

}  // namespace zlab
