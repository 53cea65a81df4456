#pragma once

#include <cstdint>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "zlab/numeric.hpp"
#include "zlab/rng.hpp"
#include "zlab/stats.hpp"

namespace zlab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// m(k) = k (1 - (3/4) log n / n)
double centering_m(double k, double n);

struct BarrierProfile {
    double y = 1.0;
    double n = 16.0;
    double c_upper = 1e3;
    double c_lower = 20.0;
    std::vector<double> c_ell;  // c_l = prod_{i<=l} (1 + e^{-n_{i-1}})

    int r() const;  // ceil(y / 4)
    double upper(double k) const;  // U_y(k); +inf for k < r
    double lower(double k) const;  // L_y(k); -inf for k < r
};

// Full-size constants c_upper = 1000, c_lower = 20.
BarrierProfile asymptotic_profile(double y, double n);
// Small-n constants (3, 2) for desk-scale simulation.
BarrierProfile surrogate_profile(double y, double n);

// levels = (n_{-1}, n_0, n_1, ...); c_l for l = 0 .. levels.size() - 1.
std::vector<double> c_sequence(const std::vector<double>& levels);

// Per-shift inputs for the good-set predicates. All arrays are scale-major,
// value[i * nshifts + h]. Empty optional arrays mean "not supplied".
struct FlagInputs {
    std::vector<double> scales;   // increasing
    std::size_t nshifts = 0;
    std::vector<cplx> S_tilde;    // S~_k(h)
    std::vector<double> zeta_e;   // |(zeta e^{-S_k})(h)|
    std::vector<double> zeta_m;   // |(zeta M_{-1} ... M_{l-1} M^{(k)}_{l-1})(h)|
    std::vector<double> zeta_abs; // |zeta(h)|, per shift (for H)
};

struct FlagParams {
    double a_const = 1e3;  // A: |S~_k - S~_{n_{l-1}}| <= a_const (n_l - n_{l-1})
    double d_exp = 1e4;    // D: additive e^{-d_exp (n - n_{l-1})}
};

// Flags at ladder levels l = 0 .. L; flag(l, h) stored at [l * nshifts + h].
struct EventFlags {
    std::size_t levels = 0, nshifts = 0;
    std::vector<std::uint8_t> A, B, C, D, G;
    std::vector<std::uint8_t> H;  // per shift; empty if zeta_abs not given

    bool at(const std::vector<std::uint8_t>& f, std::size_t l, std::size_t h) const { return f[l * nshifts + h]; }
};

// levels = (n_{-1}, n_0, ..., n_L). Every level value n_{l-1} used as a base
// point must appear in inputs.scales.
EventFlags event_flags(const FlagInputs& in, const BarrierProfile& prof, const std::vector<double>& levels,
                       const FlagParams& prm = {});

// H(y) threshold e^y e^n / n^{3/4}.
double high_point_threshold(double y, double n);

// Barrier for a walk W_j = sum_{i<=j} N_i, N_i ~ N(0, 1/2), W_0 = 0:
// lower[j-1] < W_j <= upper[j-1] for j = 1..k (infinite entries disable).
struct Barrier {
    std::vector<double> upper, lower;
    int k() const { return static_cast<int>(upper.size()); }

    static Barrier none(int k);
    static Barrier constant(int k, double y);
    // The ballot event: W_r - m(r) in [L_y(r), U_y(r)], W_j < m(j) + U_y(j) for r < j <= k.
    static Barrier from_profile(int k, const BarrierProfile& p);
};

// f_y(x) = g(x) + alpha x + y with g(0) = g(k) = 0 concave, sampled at
// integers 0..k.
struct BarrierFunction {
    int k = 0;
    std::vector<double> g;
    double alpha = 0, y = 0;

    double f(int j) const { return g[static_cast<std::size_t>(j)] + alpha * j + y; }
    Barrier barrier() const;
    // Finite-difference check of |g'| < c1^-1 min(x+1, k-x+1)^{theta-1} and
    // -c1 min(..)^{theta-2} < g'' <= 0 on the integer grid (step 1).
    bool envelopes_hold(double theta, double c1) const;
};

// g(x) = a ((x+1)^theta + (k-x+1)^theta - 1 - (k+1)^theta), a and alpha drawn
// so that the envelopes hold.
BarrierFunction sample_barrier_function(Xoshiro256pp& rng, int k, double theta, double c1, double y);

struct BridgeDP {
    double log_joint = -kInf;     // log P(W_k in (w, w+1], survive)
    double log_endpoint = -kInf;  // log P(W_k in (w, w+1])
    double conditional = 0;       // ratio of the two
    double mesh = 0;              // points per standard deviation of one step
    double joint() const;
};

inline constexpr double kMinMesh = 200.0;

// Transfer-operator integration on a mesh of `mesh` points per step standard
// deviation, in the frame of the exponentially tilted walk whose mean path
// ends in the middle of the bin. ToleranceError below kMinMesh.
BridgeDP bridge_survival_dp(int k, double w, const Barrier& b, double mesh = kMinMesh);

// Same operator with the endpoint pinned at W_k = w (density ratio).
double bridge_survival_pinned(int k, double w, const Barrier& b, double mesh = kMinMesh);

// Joint probabilities for endpoint bins (w_i, w_i + 1] from one DP run.
std::vector<BridgeDP> bridge_survival_dp_bins(int k, const std::vector<double>& ws, const Barrier& b,
                                              double mesh = kMinMesh);

struct BridgeMC {
    Estimate conditional;  // survivors / endpoint hits, Wilson CI
    std::uint64_t paths = 0, hits = 0, survivors = 0;
};
// Unconditioned paths from per-path streams seed_stream(seed, path), filtered
// on the endpoint bin. DomainError if M < 1e4; InsufficientSample below 100 hits.
BridgeMC bridge_survival_mc(std::uint64_t seed, int k, double w, const Barrier& b, std::uint64_t M,
                            unsigned workers = 1);

// (y+1)(U_y(k) + m(k) - w + 1) k^{-3/2} e^{-w^2/k}
double ballot_bound(int k, double y, double w, const BarrierProfile& p);
// (z1+1)(z1-z2+1)/m
double constant_barrier_bound(double m, double z1, double z2);

struct BallotRow {
    int k = 0;
    double y = 0, w = 0, dp = 0, mc = NAN, bound = 0, ratio = 0;
};
void write_ballot_csv(std::ostream& os, const std::vector<BallotRow>& rows);

}  // namespace zlab
