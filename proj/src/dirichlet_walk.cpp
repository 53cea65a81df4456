#include "zlab/dirichlet_walk.hpp"

#include <cmath>

#include "zlab/csv.hpp"
#include "zlab/errors.hpp"
#include "zlab/parallel.hpp"
#include "zlab/simd.hpp"
#include "zlab/stats.hpp"

namespace zlab {

namespace {

PrimeRange walk_range(const PrimeTable& t, double j, double k) {
    try {
        return primes_in_log_range(t, j, k);
    } catch (const CapacityError& e) {
        throw CapacityError("dirichlet_walk", e.what());
    }
}

}  // namespace

cplx range_sum(const PrimeTable& t, PrimeRange r, cplx s) {
    CompensatedSum re, im;
    for (std::size_t i = r.begin; i < r.end; ++i) {
        const cplx z = int_pow_minus(t.primes[i], s);
        const cplx v = z + 0.5 * z * z;
        re.add(v.real());
        im.add(v.imag());
    }
    return {re.value(), im.value()};
}

cplx partial_sum(const PrimeTable& t, double k_start, double k, double tau, double h) {
    const PrimeRange r = walk_range(t, k_start, k);
    const long double th = static_cast<long double>(tau) + static_cast<long double>(h);
    CompensatedSum re, im;
    for (std::size_t i = r.begin; i < r.end; ++i) {
        const cplx z = int_pow_minus(t.primes[i], 0.5, th);
        const cplx v = z + 0.5 * z * z;
        re.add(v.real());
        im.add(v.imag());
    }
    return {re.value(), im.value()};
}

std::vector<cplx> increments(const MultiscaleWalk& w) {
    const std::size_t m = w.scales.size(), n = w.grid.count;
    if (m < 2) throw StructuralError("dirichlet_walk", "increments need at least two scales");
    std::vector<cplx> y((m - 1) * n);
    for (std::size_t i = 1; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) y[(i - 1) * n + j] = w.tilde(i, j) - w.tilde(i - 1, j);
    return y;
}

MultiscaleWalk evaluate_on_grid(const PrimeTable& t, const WalkConfig& cfg) {
    if (cfg.scales.empty()) throw StructuralError("dirichlet_walk", "no scales");
    for (std::size_t i = 1; i < cfg.scales.size(); ++i)
        if (!(cfg.scales[i] >= cfg.scales[i - 1])) throw DomainError("dirichlet_walk", "scales must increase");
    if (cfg.grid.count == 0) throw StructuralError("dirichlet_walk", "empty shift grid");
    if (cfg.grid.count > 1 && !(cfg.grid.dh > 0)) throw DomainError("dirichlet_walk", "grid spacing must be > 0");
    const double hlast = cfg.grid.at(cfg.grid.count - 1);
    if (cfg.grid.h0 < -2.0 || hlast > 2.0) throw DomainError("dirichlet_walk", "grid outside [-2,2]");

    MultiscaleWalk w;
    w.scales = cfg.scales;
    w.grid = cfg.grid;
    const std::size_t n = cfg.grid.count, m = cfg.scales.size();
    w.values.assign(m * n, cplx{});
    std::vector<double> re(n), im(n);
    const auto& K = simd::kernels();
    double lo = cfg.k_start;
    for (std::size_t i = 0; i < m; ++i) {
        const PrimeRange r = walk_range(t, lo, cfg.scales[i]);
        const std::size_t np = r.size();
        std::vector<double> logp(np), c1r(np), c1i(np), c2r(np), c2i(np);
        for (std::size_t q = 0; q < np; ++q) {
            const std::uint64_t p = t.primes[r.begin + q];
            logp[q] = std::log(static_cast<double>(p));
            const cplx z = int_pow_minus(p, cplx(0.5, cfg.tau));
            const cplx z2 = 0.5 * z * z;
            c1r[q] = z.real();
            c1i[q] = z.imag();
            c2r[q] = z2.real();
            c2i[q] = z2.imag();
        }
        std::fill(re.begin(), re.end(), 0.0);
        std::fill(im.begin(), im.end(), 0.0);
        // Tiles of shifts are independent, so the split across workers does
        // not change any bit of the result.
        parallel_chunks(n, simd::kTile, cfg.workers, [&](std::size_t b, std::size_t e) {
            simd::RotateArgs a;
            a.logp = logp.data();
            a.c1re = c1r.data();
            a.c1im = c1i.data();
            a.c2re = c2r.data();
            a.c2im = c2i.data();
            a.nprimes = np;
            a.h0 = cfg.grid.h0;
            a.dh = cfg.grid.dh;
            a.j_begin = b;
            a.j_end = e;
            a.out_re = re.data() + b;
            a.out_im = im.data() + b;
            K.rotate_accumulate(a);
        });
        for (std::size_t j = 0; j < n; ++j) {
            const cplx prev = i == 0 ? cplx{} : w.values[(i - 1) * n + j];
            w.values[i * n + j] = prev + cplx(re[j], im[j]);
        }
        lo = cfg.scales[i];
    }
    return w;
}

double higher_order_tail(const PrimeTable& t, PrimeRange r, cplx s) {
    CompensatedSum acc;
    for (std::size_t i = r.begin; i < r.end; ++i) {
        const cplx z = int_pow_minus(t.primes[i], s);
        cplx w = z * z * z;
        for (int a = 3; std::abs(w) >= 1e-18; ++a) {
            acc.add(w.real() / a);
            w *= z;
        }
    }
    return acc.value();
}

double higher_order_tail(const PrimeTable& t, double j, double k, cplx s) {
    return higher_order_tail(t, walk_range(t, j, k), s);
}

EulerCheck euler_product_check(const PrimeTable& t, PrimeRange r, cplx s) {
    CompensatedSum ds, logprod;
    for (std::size_t i = r.begin; i < r.end; ++i) {
        const cplx z = int_pow_minus(t.primes[i], s);
        ds.add((z + 0.5 * z * z).real());
        // log|1 - z| = log1p(-2 Re z + |z|^2) / 2
        logprod.add(0.5 * std::log1p(-2.0 * z.real() + std::norm(z)));
    }
    const double R = higher_order_tail(t, r, s);
    EulerCheck c;
    c.lhs = std::exp(-ds.value() - R);
    c.rhs = std::exp(logprod.value());
    c.residual = std::abs(c.lhs - c.rhs);
    return c;
}

EulerCheck euler_product_check(const PrimeTable& t, double j, double k, cplx s) {
    return euler_product_check(t, walk_range(t, j, k), s);
}

void write_walk_csv(const MultiscaleWalk& w, std::ostream& os) {
    CsvWriter csv(os);
    csv.header({"scale", "h", "re", "im"});
    for (std::size_t i = 0; i < w.scales.size(); ++i)
        for (std::size_t j = 0; j < w.grid.count; ++j)
            csv.row(w.scales[i], w.grid.at(j), w.tilde(i, j).real(), w.tilde(i, j).imag());
}

}  // namespace zlab
