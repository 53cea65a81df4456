#include "zlab/moment_local.hpp"

#include <cmath>
#include <numeric>

#include "zlab/csv.hpp"
#include "zlab/errors.hpp"
#include "zlab/parallel.hpp"
#include "zlab/stats.hpp"

namespace zlab {

namespace {

cplx ppow(std::uint64_t p, cplx e) { return std::exp(-e * std::log(static_cast<double>(p))); }

}  // namespace

bool ShiftVector::is_zero(double eps) const {
    for (const auto& x : z)
        if (std::abs(x) > eps) return false;
    return true;
}

double ShiftVector::l1() const {
    double s = 0;
    for (const auto& x : z) s += std::abs(x);
    return s;
}

cplx sigma_zw(std::uint64_t p, int alpha, cplx z, cplx w) {
    if (alpha < 0) throw DomainError("moment_local", "sigma needs alpha >= 0");
    cplx s{};
    for (int a = 0; a <= alpha; ++a) s += ppow(p, static_cast<double>(a) * z + static_cast<double>(alpha - a) * w);
    return s;
}

cplx B_series(std::uint64_t p, int alpha, const ShiftVector& zv, int J) {
    const auto& z = zv.z;
    const double grow = std::max(-z[0].real(), -z[1].real()) + std::max(-z[2].real(), -z[3].real());
    const double q = std::pow(static_cast<double>(p), -1.0 + std::max(0.0, grow));
    if (q >= 0.9) throw DomainError("moment_local", "B series does not converge for these shifts");
    if (J <= 0) {
        // tail ~ (alpha + j + 1)(j + 1) q^j / (1 - q)
        J = 1;
        while ((alpha + J + 1.0) * (J + 1.0) * std::pow(q, J) / (1.0 - q) > 1e-17) ++J;
    }
    cplx num{}, den{};
    const double pinv = 1.0 / static_cast<double>(p);
    double pj = 1.0;
    for (int j = 0; j <= J; ++j) {
        const cplx s34 = sigma_zw(p, j, z[2], z[3]);
        num += sigma_zw(p, alpha + j, z[0], z[1]) * s34 * pj;
        den += sigma_zw(p, j, z[0], z[1]) * s34 * pj;
        pj *= pinv;
    }
    return num / den;
}

cplx B_display(std::uint64_t p, int alpha, const ShiftVector& zv) {
    const auto& z = zv.z;
    const cplx P1 = ppow(p, z[0]), P2 = ppow(p, z[1]), P3 = ppow(p, z[2]), P4 = ppow(p, z[3]);
    cplx P3a = 1.0, P4a = 1.0;  // p^{-z3 alpha}, p^{-z4 alpha}
    for (int k = 0; k < alpha; ++k) {
        P3a *= P3;
        P4a *= P4;
    }
    const cplx all = P1 * P2 * P3 * P4;
    const cplx b0 = P3a * P3 - P4a * P4;
    const cplx b1 = (P1 + P2) * P3 * P4 * (P3a - P4a);
    const cplx b2 = all * (P4 * P3a - P3 * P4a);
    const double pi = 1.0 / static_cast<double>(p);
    return (b0 - pi * b1 + pi * pi * b2) / ((P3 - P4) * (1.0 - pi * pi * all));
}

double B_zero(std::uint64_t p, int alpha) {
    const double pi = 1.0 / static_cast<double>(p), a = alpha;
    return (1.0 + a - 2.0 * a * pi + (a - 1.0) * pi * pi) / (1.0 - pi * pi);
}

cplx B_closed(std::uint64_t p, int alpha, const ShiftVector& z) {
    if (alpha == 0) return 1.0;
    if (z.is_zero(1e-300)) return B_zero(p, alpha);
    const ShiftVector w = z.permuted();
    if (std::abs(w.z[2] - w.z[3]) >= 1e-12) return B_display(p, alpha, w);
    // Removable singularity at z3 = z4 (display arguments): even part over
    // +-h and +-h/2, then one Richardson step, error O(h^4).
    const double h = 1e-3 / (alpha * std::log(static_cast<double>(p)) + 1.0);
    auto at = [&](double d) {
        ShiftVector u = w;
        u.z[2] += d;
        return B_display(p, alpha, u);
    };
    const cplx g1 = 0.5 * (at(h) + at(-h));
    const cplx g2 = 0.5 * (at(0.5 * h) + at(-0.5 * h));
    return (4.0 * g2 - g1) / 3.0;
}

int f_mult(int k) {
    switch (k) {
        case 0: return 1;
        case 1: return -2;
        case 2: return 1;
        default: return 0;
    }
}

cplx local_factor(std::uint64_t p, int v1, int v2, const ShiftVector& z) {
    if (v1 < 0 || v2 < 0) throw DomainError("moment_local", "valuations must be >= 0");
    const ShiftVector pz = z.permuted();
    const bool zero = z.is_zero(1e-300);
    // exponents e - min(e1, e2) never exceed 2 + |v1 - v2|
    const int amax = 2 + std::abs(v1 - v2);
    std::vector<cplx> bz(amax + 1), bpz(amax + 1);
    for (int a = 0; a <= amax; ++a) {
        bz[a] = zero ? cplx(B_zero(p, a)) : B_closed(p, a, z);
        bpz[a] = zero ? bz[a] : B_closed(p, a, pz);
    }
    cplx s{};
    for (int k1 = 0; k1 <= 2; ++k1)
        for (int k2 = 0; k2 <= 2; ++k2) {
            const int e1 = k1 + v1, e2 = k2 + v2, lo = std::min(e1, e2), hi = std::max(e1, e2);
            const double w = f_mult(k1) * f_mult(k2) * std::pow(static_cast<double>(p), -hi);
            s += w * bz[e1 - lo] * bpz[e2 - lo];
        }
    return s;
}

cplx LogValue::value() const {
    if (std::isinf(log_abs) && log_abs < 0) return 0.0;
    return std::polar(std::exp(log_abs), arg);
}

int Factored::v(std::uint64_t p) const {
    for (auto [q, e] : pv)
        if (q == p) return e;
    return 0;
}

Factored factor(std::uint64_t c) {
    if (c == 0) throw DomainError("moment_local", "cannot factor 0");
    Factored f;
    for (std::uint64_t d = 2; d * d <= c; ++d) {
        int e = 0;
        while (c % d == 0) {
            c /= d;
            ++e;
        }
        if (e) f.pv.push_back({d, e});
    }
    if (c > 1) f.pv.push_back({c, 1});
    return f;
}

LogValue frak_S(const PrimeTable& t, PrimeRange I, std::uint64_t c1, std::uint64_t c2, const ShiftVector& z,
                unsigned workers) {
    const Factored f1 = factor(c1), f2 = factor(c2);
    const std::size_t n = I.end > I.begin ? I.end - I.begin : 0;
    const std::size_t nb = (n + kFrakBlock - 1) / kFrakBlock;
    std::vector<double> la(nb), ar(nb);
    std::vector<char> zero(nb, 0);
    parallel_chunks(n, kFrakBlock, workers, [&](std::size_t b, std::size_t e) {
        CompensatedSum l, a;
        const std::size_t blk = b / kFrakBlock;
        for (std::size_t i = I.begin + b; i < I.begin + e; ++i) {
            const std::uint64_t p = t.primes[i];
            const cplx v = local_factor(p, f1.v(p), f2.v(p), z);
            if (v == cplx{}) {
                zero[blk] = 1;
                return;
            }
            l.add(std::log(std::abs(v)));
            a.add(std::arg(v));
        }
        la[blk] = l.value();
        ar[blk] = a.value();
    });
    LogValue out;
    CompensatedSum l, a;
    for (std::size_t k = 0; k < nb; ++k) {
        if (zero[k]) {
            out.log_abs = -INFINITY;
            return out;
        }
        l.add(la[k]);
        a.add(ar[k]);
    }
    out.log_abs = l.value();
    out.arg = a.value();
    return out;
}

double frak_S_bound_log(const PrimeTable& t, PrimeRange I, std::uint64_t c1, std::uint64_t c2, double n,
                        double K_eps, double K_h) {
    const std::uint64_t r = std::gcd(c1, c2);
    const std::uint64_t c1p = c1 / r, c2p = c2 / r;
    const double en = std::exp(n);
    CompensatedSum acc;
    for (std::size_t i = I.begin; i < I.end; ++i) {
        const double p = static_cast<double>(t.primes[i]);
        acc.add(std::log1p(-4.0 / p + K_eps * (std::log(p) / (p * en) + 1.0 / (p * p))));
    }
    auto logh = [&](std::uint64_t c) {
        double s = 0;
        for (auto [p, a] : factor(c).pv) s += std::log(K_h * a * a * std::log(static_cast<double>(p)) / en);
        return s;
    };
    return acc.value() + logh(c1p) + logh(c2p) -
           std::log(static_cast<double>(r) * static_cast<double>(c1p) * static_cast<double>(c2p));
}

void write_identity_csv(std::ostream& os, const std::vector<IdentityRow>& rows) {
    CsvWriter w(os);
    w.header({"p", "alpha", "z_norm", "residual"});
    for (const auto& r : rows) w.row(r.p, r.alpha, r.z_norm, r.residual);
}

double d3_prime_power(int alpha) { return 0.5 * (alpha + 1.0) * (alpha + 2.0); }

}  // namespace zlab
