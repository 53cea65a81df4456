#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "zlab/dirichlet_walk.hpp"
#include "zlab/primes.hpp"
#include "zlab/rng.hpp"
#include "zlab/stats.hpp"

namespace zlab {

// X_p(h) = Re(Z p^{-1/2-ih} + Z^2 p^{-1-2ih} / 2) with Z = e^{i theta}.
double X_p(double theta, std::uint64_t p, double h);
double sample_X_p(Xoshiro256pp& rng, std::uint64_t p, double h);
// E X_p = 0, Var X_p = 1/(2p) + 1/(8p^2)
double X_p_variance(std::uint64_t p);

struct EulerModelConfig {
    double k_start = 0.0;
    std::vector<double> scales;  // S_k for each k, summing e^{k_start} < log p <= e^k
    ShiftGrid grid;
    unsigned workers = 1;
};

// One path: an angle per prime of the range, shared by every shift.
struct RandomEulerPath {
    PrimeRange range;
    std::vector<double> theta;  // radians, theta[i] for prime range.begin + i
    std::vector<double> scales;
    ShiftGrid grid;
    std::vector<double> values;  // scale-major S_k(h)

    double S(std::size_t i, std::size_t j) const { return values[i * grid.count + j]; }
};

RandomEulerPath sample_euler_path(Xoshiro256pp& rng, const PrimeTable& t, const EulerModelConfig& cfg);
// Deterministic evaluation with given angles (theta.size() == range size).
RandomEulerPath euler_path_from_angles(const PrimeTable& t, const EulerModelConfig& cfg, std::vector<double> theta);

// N(0, 1/2) increments and their partial sums G_k.
struct GaussianWalk {
    std::vector<double> increments;
    std::vector<double> sums;  // sums[k-1] = G_k
};
GaussianWalk sample_gaussian_walk(Xoshiro256pp& rng, std::size_t steps);

// Monte Carlo sampler of S_{k_m} - S_{k_start} at h for several marks k_m.
// Primes p <= exact_limit are drawn exactly (one uniform angle each); the
// remaining primes of each segment between marks contribute one Gaussian with
// the exact summed variance. exact_limit = 0 makes every prime exact.
// Path q uses seed_stream(seed, q).
struct ModelSampler {
    ModelSampler(const PrimeTable& t, double k_start, std::vector<double> marks, double h = 0.0,
                 std::uint64_t exact_limit = 20'000);

    // Row-major M x marks.size().
    std::vector<double> sample(std::uint64_t seed, std::size_t M, unsigned workers = 1) const;

    std::size_t exact_primes() const { return a_.size(); }
    std::size_t total_primes() const { return total_; }
    // Exact variance of S_{k_m} - S_{k_start}.
    double variance(std::size_t m) const { return var_total_[m]; }
    const std::vector<double>& marks() const { return marks_k_; }

private:
    std::vector<double> marks_k_;
    std::vector<double> a_, b_, phase_;
    std::vector<std::size_t> exact_marks_;  // prime counts within the exact block
    std::vector<double> gauss_var_;          // cumulative tail variance at each mark
    std::vector<double> var_total_;
    std::size_t total_ = 0;
};

// E[e^{z X_p}] by the trapezoid rule in theta (spectrally accurate for this
// periodic integrand).
double laplace_per_prime(std::uint64_t p, double z, int nodes = 256);

struct LaplaceReport {
    Estimate estimate;  // E[e^{lambda (S_k - S_j)}]
    double bound = 0;   // exp((k - j + C) lambda^2 / 4)
    bool pass = false;  // estimate.lo <= bound
};
LaplaceReport laplace_check(std::uint64_t seed, const PrimeTable& t, double j, double k, double lambda,
                            std::size_t M, double C, unsigned workers = 1);

struct MomentRow {
    int q = 0;
    double moment = 0;    // Monte Carlo E[(S_k - S_j)^{2q}]
    double gaussian = 0;  // (2q)! / (2^q q!) ((k - j)/2)^q
    double ratio = 0;
};
std::vector<MomentRow> moment_match(std::uint64_t seed, const PrimeTable& t, double j, double k,
                                    const std::vector<int>& qs, std::size_t M, unsigned workers = 1);

struct GaussianityReport {
    double distance = 0;  // sup over the interval family of |P_emp - P_gauss|
    double beta = 0;      // exact variance of the increment
    std::size_t intervals = 0;
    std::size_t primes = 0;
};
// Interval family: (q_a, q_b] for all pairs of the empirical quantiles at
// levels i / (E - 1), i = 0..E-1, with the extreme levels at -inf and +inf;
// E = 46 gives 1035 intervals.
GaussianityReport gaussian_distance(const std::vector<double>& xs, double beta, int endpoints = 46);
GaussianityReport increment_gaussianity(std::uint64_t seed, const PrimeTable& t, double j, double k, std::size_t M,
                                        unsigned workers = 1, std::uint64_t exact_limit = 20'000);

struct DensityRow {
    double v = 0;
    Estimate prob;      // P(S_r in [v, v + 1/Delta)), Wilson CI
    double asym = 0;    // Delta^{-1} r^{-1/2} e^{-v^2/r}
    double ratio = 0;
};
// Bins [v, v + 1/Delta) with v = i / Delta, |v| <= 2 sqrt(r).
std::vector<DensityRow> density_check(std::uint64_t seed, const PrimeTable& t, double r, double Delta,
                                      std::size_t M, double k_start = 0.0, unsigned workers = 1);
std::vector<DensityRow> density_table(const std::vector<double>& xs, double r, double Delta);

// Branching schedule of the hierarchical surrogate.
struct HierarchySpec {
    std::vector<int> branching;   // children per node at each level
    std::vector<double> variance;  // increment variance at each level
    double n = 0;                  // log-scale depth used for the centering
    std::size_t leaves() const;
};
// b = e: greedy 2/3 children so the leaf count after l levels stays closest
// to e^l; variance 1/2 per level.
HierarchySpec hierarchy_e(int n);
// b = 2: round(n log2 e) binary levels with variance log(2) / 2 each, so the
// leaf variance is still about n / 2.
HierarchySpec hierarchy_binary(int n);

inline constexpr std::size_t kMaxLeaves = 10'000'000;

// m(n) = n - (3/4) log n
double brw_centering(double n);

// Leaf values (root-to-leaf sums) of one field; streams seed_stream(seed, 4 run + l).
std::vector<double> sample_field(const HierarchySpec& s, std::uint64_t seed, std::uint64_t run);
// Centered maxima max - m(n), m(n) = n - (3/4) log n, one per run.
std::vector<double> sample_hierarchical(const HierarchySpec& s, std::uint64_t seed, std::size_t runs,
                                        unsigned workers = 1);
// Tree distance: levels below the deepest common ancestor of two leaves.
int tree_distance(const HierarchySpec& s, std::size_t leaf_a, std::size_t leaf_b);

struct TailFit {
    std::vector<double> ys, probs;  // P(centered max > y)
    LineFit fit;  // log P against y, weighted by the inverse delta-method variance M p / (1 - p)
    LineFit ols;  // same points, unweighted
    double median = 0;
};
TailFit tail_shape(const std::vector<double>& centered, const std::vector<double>& ys);

void write_density_csv(std::ostream& os, const std::vector<DensityRow>& rows, double Delta);

}  // namespace zlab
