#pragma once

#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "zlab/numeric.hpp"
#include "zlab/primes.hpp"

namespace zlab {

inline constexpr int kNoOmegaCap = std::numeric_limits<int>::max();
inline constexpr std::uint64_t kNoLengthCap = std::numeric_limits<std::uint64_t>::max();

struct MollifierSpec {
    double p_lo = 0.0;  // primes p with p_lo < p <= p_hi
    double p_hi = 0.0;
    int omega_cap = kNoOmegaCap;             // V
    std::uint64_t length_cap = kNoLengthCap;  // N
    std::size_t term_budget = 10'000'000;
};

using BigIndex = unsigned __int128;

// m can exceed 2^64 for unrestricted mollifiers over a dozen primes; log_m
// (sum of log p in long double) drives evaluation.
struct SparseTerm {
    BigIndex m;
    long double log_m;
    cplx a;
};

std::string to_string(BigIndex m);

// Terms sorted by m.
struct SparsePoly {
    std::vector<SparseTerm> terms;
    std::size_t size() const { return terms.size(); }
};

PrimeRange mollifier_primes(const PrimeTable& t, const MollifierSpec& spec);

// mu(m) over squarefree m <= N built from range primes with Omega(m) <= V.
SparsePoly mollifier_coeffs(const PrimeTable& t, const MollifierSpec& spec);

cplx evaluate_poly(const SparsePoly& poly, cplx s);

// Prime zeta partial sum P(s) = sum_{range} p^{-s}.
cplx prime_zeta(const PrimeTable& t, PrimeRange r, cplx s);

// e^{-alpha V} prod_j exp(e^{j alpha} |P(js)| / j). +inf when the product
// diverges (e^alpha >= p_min^{Re s}).
double newton_tail_bound(const PrimeTable& t, const MollifierSpec& spec, cplx s, double alpha = 1.0);

// sum over squarefree m from the range with Omega(m) > V of m^{-sigma},
// via elementary symmetric sums (exact up to rounding).
double omega_tail_exact(const PrimeTable& t, const MollifierSpec& spec, double sigma);

struct MollifierCheckParams {
    double hypothesis_bound = 1e300;  // |S~_k - S~_{n_{l-1}}| must not exceed this
    double slack = 0.0;               // the factor (1 + slack) on |M|
    double additive = 0.0;            // the additive error term
    double h = 0.0;
};

struct MollifierReport {
    std::size_t samples = 0;
    std::size_t excluded = 0;  // hypothesis violated
    std::size_t holding = 0;
    double fraction = 0.0;           // holding / (samples - excluded)
    double max_identity_gap = 0.0;  // max |exp(-dS - R) - |M||
    bool unbounded = false;          // V and N impose no restriction
};

MollifierReport mollifier_approx_check(const PrimeTable& t, const MollifierSpec& spec,
                                       const std::vector<double>& taus, const MollifierCheckParams& prm);

void write_poly_csv(const SparsePoly& p, std::ostream& os);

}  // namespace zlab
