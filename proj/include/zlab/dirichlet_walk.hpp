#pragma once

#include <cstddef>
#include <ostream>
#include <vector>

#include "zlab/numeric.hpp"
#include "zlab/primes.hpp"

namespace zlab {

// Uniform shift grid h_j = h0 + j*dh, j < count.
struct ShiftGrid {
    double h0 = 0.0;
    double dh = 0.0;
    std::size_t count = 1;
    double at(std::size_t j) const { return h0 + static_cast<double>(j) * dh; }
};

struct WalkConfig {
    double k_start = 0.0;
    std::vector<double> scales;  // k_1 < ... < k_m
    double tau = 0.0;
    ShiftGrid grid;
    unsigned workers = 1;
};

struct MultiscaleWalk {
    std::vector<double> scales;
    ShiftGrid grid;
    std::vector<cplx> values;  // scale-major: values[i * grid.count + j]

    const cplx& tilde(std::size_t i, std::size_t j) const { return values[i * grid.count + j]; }
    double S(std::size_t i, std::size_t j) const { return tilde(i, j).real(); }
};

// S~ over e^{k_start} <= log p <= e^k at s = 1/2 + i(tau + h).
cplx partial_sum(const PrimeTable& t, double k_start, double k, double tau, double h);
// Same sum over an explicit index range.
cplx range_sum(const PrimeTable& t, PrimeRange r, cplx s);

// Y_j = S~_{k_j} - S~_{k_{j-1}}, rows j = 1..m-1.
std::vector<cplx> increments(const MultiscaleWalk& w);

MultiscaleWalk evaluate_on_grid(const PrimeTable& t, const WalkConfig& cfg);

// sum over the range of sum_{alpha >= 3} Re p^{-alpha s} / alpha.
double higher_order_tail(const PrimeTable& t, double j, double k, cplx s);
double higher_order_tail(const PrimeTable& t, PrimeRange r, cplx s);

struct EulerCheck {
    double lhs = 1.0;  // exp(-dS - R)
    double rhs = 1.0;  // |prod (1 - p^{-s})|
    double residual = 0.0;
};
EulerCheck euler_product_check(const PrimeTable& t, double j, double k, cplx s);
EulerCheck euler_product_check(const PrimeTable& t, PrimeRange r, cplx s);

void write_walk_csv(const MultiscaleWalk& w, std::ostream& os);

}  // namespace zlab
