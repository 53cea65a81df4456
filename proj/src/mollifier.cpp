#include "zlab/mollifier.hpp"

#include <cmath>

#include "zlab/csv.hpp"
#include "zlab/dirichlet_walk.hpp"
#include "zlab/errors.hpp"
#include "zlab/stats.hpp"

namespace zlab {

PrimeRange mollifier_primes(const PrimeTable& t, const MollifierSpec& spec) {
    if (!(spec.p_lo < spec.p_hi)) throw DomainError("mollifier", "empty or inverted prime range");
    if (spec.p_hi > static_cast<double>(t.limit)) throw CapacityError("mollifier", "prime range beyond sieve limit");
    if (spec.omega_cap < 0) throw DomainError("mollifier", "omega cap must be >= 0");
    if (spec.length_cap < 1) throw DomainError("mollifier", "length cap must be >= 1");
    return {t.count_upto(spec.p_lo), t.count_upto(spec.p_hi)};
}

std::string to_string(BigIndex m) {
    if (m == 0) return "0";
    std::string s;
    while (m) {
        s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(m % 10)));
        m /= 10;
    }
    return s;
}

SparsePoly mollifier_coeffs(const PrimeTable& t, const MollifierSpec& spec) {
    const PrimeRange r = mollifier_primes(t, spec);
    SparsePoly out;
    struct Frame {
        std::size_t next;
        BigIndex m;
        long double log_m;
        int omega;
    };
    const BigIndex cap = spec.length_cap == kNoLengthCap ? ~BigIndex{0} : BigIndex{spec.length_cap};
    std::vector<Frame> stack{{r.begin, 1, 0.0L, 0}};
    out.terms.push_back({1, 0.0L, 1.0});
    while (!stack.empty()) {
        const Frame f = stack.back();
        stack.pop_back();
        if (f.omega >= spec.omega_cap) continue;
        for (std::size_t i = f.next; i < r.end; ++i) {
            const std::uint64_t p = t.primes[i];
            if (f.m > cap / p) {
                if (spec.length_cap == kNoLengthCap) throw CapacityError("mollifier", "term index exceeds 2^128");
                break;  // primes ascend, so every later p fails too
            }
            const BigIndex m = f.m * p;
            const long double lm = f.log_m + std::log(static_cast<long double>(p));
            out.terms.push_back({m, lm, (f.omega + 1) % 2 ? -1.0 : 1.0});
            if (out.terms.size() > spec.term_budget)
                throw CapacityError("mollifier", "term budget exceeded after " + std::to_string(out.terms.size()) + " terms");
            stack.push_back({i + 1, m, lm, f.omega + 1});
        }
    }
    std::sort(out.terms.begin(), out.terms.end(), [](const SparseTerm& a, const SparseTerm& b) { return a.m < b.m; });
    return out;
}

cplx evaluate_poly(const SparsePoly& poly, cplx s) {
    CompensatedSum re, im;
    for (const auto& term : poly.terms) {
        const double mag = static_cast<double>(std::exp(-static_cast<long double>(s.real()) * term.log_m));
        const cplx v = term.a * std::polar(mag, reduce_2pi(-static_cast<long double>(s.imag()) * term.log_m));
        re.add(v.real());
        im.add(v.imag());
    }
    return {re.value(), im.value()};
}

cplx prime_zeta(const PrimeTable& t, PrimeRange r, cplx s) {
    CompensatedSum re, im;
    for (std::size_t i = r.begin; i < r.end; ++i) {
        const cplx z = int_pow_minus(t.primes[i], s);
        re.add(z.real());
        im.add(z.imag());
    }
    return {re.value(), im.value()};
}

double newton_tail_bound(const PrimeTable& t, const MollifierSpec& spec, cplx s, double alpha) {
    const PrimeRange r = mollifier_primes(t, spec);
    const double V = spec.omega_cap == kNoOmegaCap ? INFINITY : static_cast<double>(spec.omega_cap);
    if (r.empty()) return std::exp(-alpha * V);
    if (std::isinf(V)) return 0.0;
    // Terms behave like (e^alpha p_min^{-sigma})^j / j for large j.
    const double ratio = std::exp(alpha) * std::pow(static_cast<double>(t.primes[r.begin]), -s.real());
    if (ratio >= 1.0) return INFINITY;
    double log_bound = -alpha * V;
    for (int j = 1; j < 100000; ++j) {
        const double term = std::exp(j * alpha) * std::abs(prime_zeta(t, r, static_cast<double>(j) * s)) / j;
        log_bound += term;
        // remaining terms are dominated by a geometric series in `ratio`
        // times the prime count
        const double tail = static_cast<double>(r.size()) * std::pow(ratio, j + 1) / (1.0 - ratio);
        if (term < 1e-18 && tail < 1e-18) break;
    }
    return std::exp(log_bound);
}

double omega_tail_exact(const PrimeTable& t, const MollifierSpec& spec, double sigma) {
    const PrimeRange r = mollifier_primes(t, spec);
    std::vector<double> e{1.0};  // elementary symmetric sums e_0..e_n
    for (std::size_t i = r.begin; i < r.end; ++i) {
        const double x = std::pow(static_cast<double>(t.primes[i]), -sigma);
        e.push_back(0.0);
        for (std::size_t k = e.size() - 1; k >= 1; --k) e[k] += x * e[k - 1];
    }
    double tail = 0.0;
    for (std::size_t k = 0; k < e.size(); ++k)
        if (static_cast<long long>(k) > spec.omega_cap) tail += e[k];
    return tail;
}

MollifierReport mollifier_approx_check(const PrimeTable& t, const MollifierSpec& spec,
                                       const std::vector<double>& taus, const MollifierCheckParams& prm) {
    const PrimeRange r = mollifier_primes(t, spec);
    const SparsePoly poly = mollifier_coeffs(t, spec);
    MollifierReport rep;
    std::size_t m_count = 0;
    for (std::size_t i = r.begin; i < r.end; ++i) m_count += 1;
    // Unbounded when every squarefree product of range primes was kept.
    rep.unbounded = m_count < 63 && poly.size() == (std::size_t{1} << m_count);
    for (double tau : taus) {
        ++rep.samples;
        const cplx s(0.5, static_cast<double>(static_cast<long double>(tau) + prm.h));
        const cplx dS = range_sum(t, r, s);
        if (std::abs(dS) > prm.hypothesis_bound) {
            ++rep.excluded;
            continue;
        }
        const double R = higher_order_tail(t, r, s);
        const double M = std::abs(evaluate_poly(poly, s));
        const double lhs = std::exp(-dS.real());
        if (lhs <= (1.0 + prm.slack) * M + prm.additive) ++rep.holding;
        rep.max_identity_gap = std::max(rep.max_identity_gap, std::abs(std::exp(-dS.real() - R) - M));
    }
    const std::size_t used = rep.samples - rep.excluded;
    rep.fraction = used ? static_cast<double>(rep.holding) / static_cast<double>(used) : 0.0;
    return rep;
}

void write_poly_csv(const SparsePoly& p, std::ostream& os) {
    CsvWriter csv(os);
    csv.header({"m", "re", "im"});
    for (const auto& term : p.terms) csv.row(to_string(term.m), term.a.real(), term.a.imag());
}

}  // namespace zlab
