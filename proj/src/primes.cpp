#include "zlab/primes.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>

#include "zlab/errors.hpp"
#include "zlab/stats.hpp"

namespace zlab {

namespace {

constexpr std::size_t kSegment = std::size_t{1} << 20;  // odd numbers per segment

std::vector<std::uint64_t> small_primes(std::uint64_t n) {
    std::vector<char> comp(n + 1, 0);
    std::vector<std::uint64_t> out;
    for (std::uint64_t i = 2; i <= n; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (std::uint64_t j = i * i; j <= n; j += i) comp[j] = 1;
    }
    return out;
}

void fill_cum(PrimeTable& t) {
    t.cum_recip.resize(t.primes.size());
    CompensatedSum s;
    for (std::size_t i = 0; i < t.primes.size(); ++i) {
        s.add(1.0 / static_cast<double>(t.primes[i]));
        t.cum_recip[i] = s.value();
    }
}

std::uint64_t to_le(std::uint64_t x) {
    if constexpr (std::endian::native == std::endian::big) {
        std::uint64_t r = 0;
        for (int i = 0; i < 8; ++i) r |= ((x >> (8 * i)) & 0xFF) << (8 * (7 - i));
        return r;
    }
    return x;
}

}  // namespace

std::size_t PrimeTable::count_upto(double x) const {
    if (!(x >= 2.0)) return 0;
    if (x >= 1.8e19) return primes.size();
    const auto v = static_cast<std::uint64_t>(std::floor(x));
    return static_cast<std::size_t>(std::upper_bound(primes.begin(), primes.end(), v) - primes.begin());
}

double PrimeTable::recip_sum(std::size_t begin, std::size_t end) const {
    if (end <= begin) return 0.0;
    const double hi = cum_recip[end - 1];
    const double lo = begin == 0 ? 0.0 : cum_recip[begin - 1];
    return hi - lo;
}

PrimeTable sieve_primes(std::uint64_t limit) {
    if (limit < 2 || limit > kMaxSieveLimit)
        throw CapacityError("primes_scales", "sieve limit " + std::to_string(limit) + " outside [2, 2^34]");
    PrimeTable t;
    t.limit = limit;
    const double approx = static_cast<double>(limit) / std::max(1.0, std::log(static_cast<double>(limit)) - 1.1);
    t.primes.reserve(static_cast<std::size_t>(approx * 1.05) + 16);
    t.primes.push_back(2);
    const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 2;
    auto base = small_primes(root);
    // Segment s covers odd numbers 2m+1 for m in [s*kSegment, (s+1)*kSegment).
    std::vector<unsigned char> seg(kSegment);
    const std::uint64_t mmax = (limit - 1) / 2;  // largest m with 2m+1 <= limit
    std::vector<std::uint64_t> next(base.size(), 0);
    for (std::size_t b = 1; b < base.size(); ++b) next[b] = (base[b] * base[b] - 1) / 2;
    for (std::uint64_t lo = 0; lo <= mmax; lo += kSegment) {
        const std::uint64_t hi = std::min<std::uint64_t>(lo + kSegment, mmax + 1);
        std::fill(seg.begin(), seg.end(), 1);
        if (lo == 0) seg[0] = 0;  // 1 is not prime
        for (std::size_t b = 1; b < base.size(); ++b) {
            const std::uint64_t p = base[b];
            std::uint64_t m = next[b];
            if (m >= hi) continue;
            for (; m < hi; m += p) seg[m - lo] = 0;
            next[b] = m;
        }
        for (std::uint64_t m = lo; m < hi; ++m)
            if (seg[m - lo]) t.primes.push_back(2 * m + 1);
    }
    fill_cum(t);
    return t;
}

void write_sieve_cache(const PrimeTable& t, const std::string& path) {
    const auto tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f) throw CapacityError("primes_scales", "cannot write sieve cache " + path);
        const std::uint64_t n = to_le(t.primes.size());
        f.write(reinterpret_cast<const char*>(&n), 8);
        std::vector<std::uint64_t> buf(1 << 16);
        for (std::size_t i = 0; i < t.primes.size(); i += buf.size()) {
            const std::size_t m = std::min(buf.size(), t.primes.size() - i);
            for (std::size_t j = 0; j < m; ++j) buf[j] = to_le(t.primes[i + j]);
            f.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(8 * m));
        }
        if (!f) throw CapacityError("primes_scales", "short write to sieve cache " + path);
    }
    std::filesystem::rename(tmp, path);
}

std::optional<PrimeTable> read_sieve_cache(const std::string& path, std::uint64_t limit) {
    std::ifstream f(path, std::ios::binary);
    if (!f) return std::nullopt;
    std::uint64_t n = 0;
    if (!f.read(reinterpret_cast<char*>(&n), 8)) return std::nullopt;
    n = to_le(n);
    std::error_code ec;
    const auto bytes = std::filesystem::file_size(path, ec);
    if (ec || bytes != 8 + 8 * n) return std::nullopt;
    PrimeTable t;
    t.limit = limit;
    t.primes.resize(n);
    if (!f.read(reinterpret_cast<char*>(t.primes.data()), static_cast<std::streamsize>(8 * n))) return std::nullopt;
    for (auto& p : t.primes) p = to_le(p);
    if (n == 0 || t.primes.front() != 2 || t.primes.back() > limit) return std::nullopt;
    fill_cum(t);
    return t;
}

PrimeTable load_or_sieve(std::uint64_t limit) {
    const char* dir = std::getenv("LAB_SIEVE_CACHE");
    if (!dir || !*dir) return sieve_primes(limit);
    std::filesystem::path d(dir);
    std::error_code ec;
    std::filesystem::create_directories(d, ec);
    const auto file = (d / ("primes_" + std::to_string(limit) + ".bin")).string();
    if (auto t = read_sieve_cache(file, limit)) return std::move(*t);
    auto t = sieve_primes(limit);
    try {
        write_sieve_cache(t, file);
    } catch (const CapacityError&) {
        // cache is best effort
    }
    return t;
}

std::uint64_t loglog_bound(double x) {
    const long double v = std::exp(std::exp(static_cast<long double>(x)));
    if (!(v < 9.2e18L)) return std::numeric_limits<std::uint64_t>::max() / 2;
    return static_cast<std::uint64_t>(std::floor(v));
}

PrimeRange primes_in_log_range(const PrimeTable& t, double j, double k) {
    if (k <= j) return {};
    const std::uint64_t hi = loglog_bound(k);
    if (hi > t.limit)
        throw CapacityError("primes_scales", "exp(e^" + std::to_string(k) + ") exceeds sieve limit " +
                                                 std::to_string(t.limit));
    const std::uint64_t lo = loglog_bound(j);
    auto b = std::upper_bound(t.primes.begin(), t.primes.end(), lo);
    auto e = std::upper_bound(t.primes.begin(), t.primes.end(), hi);
    return {static_cast<std::size_t>(b - t.primes.begin()), static_cast<std::size_t>(e - t.primes.begin())};
}

std::span<const std::uint64_t> primes_of(const PrimeTable& t, PrimeRange r) {
    return std::span<const std::uint64_t>(t.primes).subspan(r.begin, r.size());
}

double mertens_sum(const PrimeTable& t, double a, double b) {
    if (b > static_cast<double>(t.limit))
        throw CapacityError("primes_scales", "mertens_sum upper end beyond sieve limit");
    if (b <= a) return 0.0;
    if (a < 2.0) throw DomainError("primes_scales", "mertens_sum requires a >= 2");
    return t.recip_sum(t.count_upto(a), t.count_upto(b));
}

std::optional<double> iterated_log(double x, int l) {
    for (int i = 0; i < l; ++i) {
        if (!(x > 0.0)) return std::nullopt;
        x = std::log(x);
    }
    return x;
}

ScaleLadder scale_ladder_from_n(double n, const LadderParams& p) {
    if (!(n > 0.0)) throw DomainError("primes_scales", "ladder needs n = loglog T > 0");
    ScaleLadder s;
    s.n = n;
    s.log_T = std::exp(n);
    s.params = p;
    s.n_levels.push_back(p.base_cutoff);
    s.n_levels.push_back(n / 2);
    for (int l = 1;; ++l) {
        const auto lg = iterated_log(n, l);
        if (!lg) break;
        const double nl = n - p.c * *lg;
        if (!(nl > s.n_levels.back()) || nl >= n) break;
        s.n_levels.push_back(nl);
    }
    for (double nl : s.n_levels) {
        s.log_T_levels.push_back(std::exp(nl));
        s.T_levels.push_back(std::exp(std::exp(nl)));
    }
    for (int l = 0; l + 1 <= s.max_level(); ++l)
        if (ladder_feasible(s, l)) s.L = l;
    return s;
}

ScaleLadder scale_ladder(double T, const LadderParams& p) {
    if (!(T >= 3.0)) throw DomainError("primes_scales", "scale_ladder requires T >= 3");
    return scale_ladder_from_n(std::log(std::log(T)), p);
}

bool ladder_feasible(const ScaleLadder& s, int l) {
    if (l < 0 || l + 1 > s.max_level()) return false;
    const double gap = s.n - s.n_at(l);
    const double lhs = std::log(s.params.feas_const) + s.params.feas_exp * std::log(gap) + s.n_at(l + 1);
    return lhs <= s.n - std::log(s.params.feas_div);
}

}  // namespace zlab
