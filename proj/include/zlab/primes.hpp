#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace zlab {

inline constexpr std::uint64_t kMaxSieveLimit = 1ull << 34;

struct PrimeTable {
    std::uint64_t limit = 0;
    std::vector<std::uint64_t> primes;
    // cum_recip[i] = sum_{j <= i} 1/primes[j], compensated.
    std::vector<double> cum_recip;

    std::size_t size() const { return primes.size(); }
    // Number of primes <= x.
    std::size_t count_upto(double x) const;
    // sum of 1/p over indices [begin, end).
    double recip_sum(std::size_t begin, std::size_t end) const;
};

// Index range [begin, end) into PrimeTable::primes.
struct PrimeRange {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t size() const { return end - begin; }
    bool empty() const { return end == begin; }
};

PrimeTable sieve_primes(std::uint64_t limit);

// Binary cache: little-endian u64 count, then count u64 primes.
void write_sieve_cache(const PrimeTable& t, const std::string& path);
std::optional<PrimeTable> read_sieve_cache(const std::string& path, std::uint64_t limit);
// Uses $LAB_SIEVE_CACHE (a directory; files primes_<limit>.bin) when set.
PrimeTable load_or_sieve(std::uint64_t limit);

// exp(exp(x)) rounded down to an integer bound for p, saturating at 2^63.
std::uint64_t loglog_bound(double x);

// Primes with e^j < log p <= e^k.
PrimeRange primes_in_log_range(const PrimeTable& t, double j, double k);
std::span<const std::uint64_t> primes_of(const PrimeTable& t, PrimeRange r);

// sum_{a < p <= b} 1/p.
double mertens_sum(const PrimeTable& t, double a, double b);

struct LadderParams {
    double base_cutoff = 1000.0;  // n_{-1}
    double c = 1e6;               // n_l = n - c log_l n
    // Feasibility: log(feas_const) + feas_exp log(n - n_l) + n_{l+1} <= n - log(feas_div)
    double feas_const = 1e6;
    double feas_exp = 1e5;
    double feas_div = 100.0;
};

struct ScaleLadder {
    double n = 0.0;      // log log T
    double log_T = 0.0;  // e^n
    LadderParams params;
    // n_levels[0] is n_{-1}, n_levels[1] is n_0, ...
    std::vector<double> n_levels;
    std::vector<double> log_T_levels;  // e^{n_l}
    std::vector<double> T_levels;      // exp(e^{n_l}), +inf when not representable
    std::optional<int> L;              // largest feasible l (l >= 0), if any

    double n_at(int l) const { return n_levels.at(static_cast<std::size_t>(l + 1)); }
    int max_level() const { return static_cast<int>(n_levels.size()) - 2; }
};

// l-fold iterated natural log; nullopt once an argument is <= 0.
std::optional<double> iterated_log(double x, int l);

ScaleLadder scale_ladder(double T, const LadderParams& p = {});
ScaleLadder scale_ladder_from_n(double n, const LadderParams& p = {});
bool ladder_feasible(const ScaleLadder& s, int l);

}  // namespace zlab
