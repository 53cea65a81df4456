#include "zlab/zeta_eval.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/special_functions/bernoulli.hpp>

#include "zlab/barrier_ballot.hpp"
#include "zlab/csv.hpp"
#include "zlab/errors.hpp"
#include "zlab/parallel.hpp"
#include "zlab/rng.hpp"

namespace zlab {

namespace {

constexpr const char* kMod = "zeta_eval";
constexpr double kPi = std::numbers::pi;
constexpr int kPsiOrder = 12;

// Psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p), entire in p.
cplx psi(cplx p) { return std::cos(2 * kPi * (p * p - p - 1.0 / 16)) / std::cos(2 * kPi * p); }

// Psi^{(j)}(p) for j = 0..12 from Taylor coefficients on a circle of radius
// 1/2. Nodes are offset by half a step so none lands on the real axis, where
// the quotient is 0/0 at p = 1/4 + m/2.
std::array<double, kPsiOrder + 1> psi_derivatives(double p) {
    constexpr int N = 64;
    constexpr double r = 0.5;
    std::array<cplx, N> f;
    for (int m = 0; m < N; ++m) f[m] = psi(p + std::polar(r, 2 * kPi * (m + 0.5) / N));
    std::array<double, kPsiOrder + 1> d{};
    double fact = 1, rj = 1;
    for (int j = 0; j <= kPsiOrder; ++j) {
        if (j > 0) fact *= j, rj *= r;
        cplx c = 0;
        for (int m = 0; m < N; ++m) c += f[m] * std::polar(1.0, -j * 2 * kPi * (m + 0.5) / N);
        d[j] = fact * c.real() / (N * rj);
    }
    return d;
}

void check_t(double t) {
    if (!(t > 0)) throw DomainError(kMod, "zeta_critical needs t > 0");
    if (t > kMaxT) throw DomainError(kMod, "t beyond 1e12");
}

double sample_tau(std::uint64_t seed, std::size_t i, double T) {
    auto g = seed_stream(seed, i);
    return T * (1 + g.uniform());
}

}  // namespace

const char* method_name(ZetaMethod m) {
    switch (m) {
        case ZetaMethod::riemann_siegel: return "riemann_siegel";
        case ZetaMethod::euler_maclaurin: return "euler_maclaurin";
        case ZetaMethod::smoothed_dirichlet: return "smoothed_dirichlet";
    }
    return "?";
}

long double rs_theta(long double t) {
    constexpr long double pi = std::numbers::pi_v<long double>;
    const long double t2 = t * t;
    long double corr = 0, tp = t;
    // 1/48, 7/5760, 31/80640, 127/430080, 511/1216512
    constexpr std::array<long double, 5> c{1.0L / 48, 7.0L / 5760, 31.0L / 80640, 127.0L / 430080, 511.0L / 1216512};
    for (long double ci : c) {
        corr += ci / tp;
        tp *= t2;
    }
    return t / 2 * std::log(t / (2 * pi)) - t / 2 - pi / 8 + corr;
}

double hardy_z(double t) {
    if (t < 10) throw DomainError(kMod, "Riemann-Siegel used below t = 10");
    if (t > kMaxT) throw DomainError(kMod, "t beyond 1e12");
    const long double tl = t;
    const long double a = std::sqrt(tl / (2 * std::numbers::pi_v<long double>));
    const auto N = static_cast<std::uint64_t>(std::floor(a));
    const long double th = rs_theta(tl);
    CompensatedSum main;
    for (std::uint64_t n = 1; n <= N; ++n) {
        const long double ln = std::log(static_cast<long double>(n));
        main.add(std::cos(reduce_2pi(th - tl * ln)) / std::sqrt(static_cast<double>(n)));
    }
    const double p = static_cast<double>(a - N);
    const auto d = psi_derivatives(p);
    const double pi2 = kPi * kPi, pi4 = pi2 * pi2, pi6 = pi4 * pi2, pi8 = pi4 * pi4;
    const std::array<double, 5> C{
        d[0],
        -d[3] / (96 * pi2),
        d[2] / (64 * pi2) + d[6] / (18432 * pi4),
        -d[1] / (64 * pi2) - d[5] / (3840 * pi4) - d[9] / (5308416 * pi6),
        d[0] / (128 * pi2) + 19 * d[4] / (24576 * pi4) + 11 * d[8] / (5898240 * pi6) + d[12] / (2038431744 * pi8),
    };
    const double ia = static_cast<double>(1 / a);
    double rem = 0, ak = 1;
    for (double c : C) {
        rem += c * ak;
        ak *= ia;
    }
    rem *= std::sqrt(ia) * ((N % 2 == 1) ? 1.0 : -1.0);
    return 2 * main.value() + rem;
}

cplx zeta_rs(double t) {
    const double z = hardy_z(t);
    return std::polar(1.0, -reduce_2pi(rs_theta(t))) * z;
}

cplx zeta_em(cplx s, int n_terms) {
    if (s == cplx(1, 0)) throw DomainError(kMod, "pole at s = 1");
    constexpr int K = 20;
    const double at = std::abs(s.imag());
    const int N = n_terms > 0 ? n_terms : std::max(20, static_cast<int>(std::ceil(0.5 * (at + 2 * K))) + 10);
    CompensatedSum re, im;
    for (int n = 1; n < N; ++n) {
        const cplx v = int_pow_minus(static_cast<std::uint64_t>(n), s);
        re.add(v.real());
        im.add(v.imag());
    }
    const double Nd = N;
    const cplx Ns = int_pow_minus(static_cast<std::uint64_t>(N), s);  // N^{-s}
    cplx tail = Nd * Ns / (s - 1.0) + 0.5 * Ns;
    // B_{2k} / (2k)! * s (s+1) ... (s+2k-2) * N^{-s-2k+1}
    cplx rising = s;
    double fact = 2;
    double Npow = 1 / Nd;
    for (int k = 1; k <= K; ++k) {
        const double b = boost::math::bernoulli_b2n<double>(k);
        tail += b / fact * rising * Ns * Npow;
        rising *= (s + double(2 * k - 1)) * (s + double(2 * k));
        fact *= (2 * k + 1) * (2 * k + 2);
        Npow /= Nd * Nd;
    }
    return cplx(re.value(), im.value()) + tail;
}

cplx zeta_critical(double t) {
    check_t(t);
    if (t < kRsMinT) return zeta_em({0.5, t});
    return zeta_rs(t);
}

ZetaSample zeta_sample(double t, bool cross_check) {
    check_t(t);
    ZetaSample z;
    z.t = t;
    z.value = zeta_critical(t);
    z.method = t < kRsMinT ? ZetaMethod::euler_maclaurin : ZetaMethod::riemann_siegel;
    // both methods apply on [50, 1e6]; above that Euler-Maclaurin gets slow
    if (cross_check && t >= kRsMinT && t <= 1e6) {
        const cplx other = zeta_em({0.5, t});
        z.cross_check = std::abs(z.value - other) / std::abs(other);
    }
    return z;
}

cplx smoothed_dirichlet(double t, double T) {
    if (T > 1e8) throw CapacityError(kMod, "smoothed Dirichlet sum limited to T <= 1e8");
    if (T < 2) throw DomainError(kMod, "smoothed Dirichlet sum needs T >= 2");
    const auto nmax = static_cast<std::uint64_t>(std::floor(T));
    const double logT = std::log(T);
    CompensatedSum re, im;
    for (std::uint64_t n = 1; n <= nmax; ++n) {
        const double u = 1 - std::log(static_cast<double>(n)) / logT;
        const double mag = std::pow(std::max(u, 0.0), 100) / std::sqrt(static_cast<double>(n));
        // terms decrease in n, so the remaining ones sum to at most (nmax - n) * mag
        if (static_cast<double>(nmax - n + 1) * mag < 1e-18) break;
        const cplx v = mag * unit_phase(n, t);
        re.add(v.real());
        im.add(v.imag());
    }
    return {re.value(), im.value()};
}

GridMax max_on_grid(double t, const std::vector<double>& hs) {
    if (hs.empty()) throw StructuralError(kMod, "empty grid");
    GridMax g;
    g.max_abs = -1;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        if (std::abs(hs[i]) > 2) throw DomainError(kMod, "grid must lie in [-2, 2]");
        const double v = std::abs(zeta_critical(t + hs[i]));
        if (v > g.max_abs) g = {i, hs[i], v};
    }
    return g;
}

std::vector<double> discretization_grid(double T, double half_width, int refine) {
    if (T <= 1 || refine < 1) throw DomainError(kMod, "grid needs T > 1 and refine >= 1");
    const double dh = 2 * kPi / (8 * std::log(T)) / refine;
    const auto m = static_cast<long>(std::floor(half_width / dh));
    std::vector<double> hs;
    for (long i = -m; i <= m; ++i) hs.push_back(static_cast<double>(i) * dh);
    return hs;
}

std::vector<double> high_points(double t, const std::vector<double>& hs, double y, double T) {
    if (T <= std::numbers::e) throw DomainError(kMod, "high points need log log T > 0");
    const double V = high_point_threshold(y, std::log(std::log(T)));
    std::vector<double> out;
    for (double h : hs)
        if (std::abs(zeta_critical(t + h)) > V) out.push_back(h);
    return out;
}

Estimate moment_estimate(std::uint64_t seed, double T, int p, std::size_t M, unsigned workers) {
    if (p != 2 && p != 4) throw DomainError(kMod, "moment power must be 2 or 4");
    if (M == 0) throw DomainError(kMod, "no samples");
    std::vector<double> xs(M);
    parallel_chunks(M, 16, workers, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) xs[i] = std::pow(std::abs(zeta_critical(sample_tau(seed, i, T))), p);
    });
    return bootstrap_mean_ci(xs, seed);
}

double disc_mean_fourth(double t, double r, int radial, int angular) {
    if (!(r > 0) || r >= 0.5) throw DomainError(kMod, "disc radius must be in (0, 1/2)");
    if (radial != 16) throw DomainError(kMod, "radial rule is fixed at 16 Gauss nodes");
    auto ring = [&](double rho) {
        double s = 0;
        for (int m = 0; m < angular; ++m) {
            const cplx off = std::polar(rho, 2 * kPi * (m + 0.5) / angular);
            s += std::pow(std::abs(zeta_em({0.5 + off.real(), t + off.imag()})), 4);
        }
        return rho * s / angular;
    };
    const double I = boost::math::quadrature::gauss<double, 16>::integrate(ring, 0.0, r);
    return 2 * I / (r * r);
}

std::vector<SubharmonicRow> subharmonic_check(std::uint64_t seed, double T, std::size_t samples, double factor,
                                              unsigned workers) {
    const double n = std::log(std::log(T));
    const double r = 2 * std::exp(-n);
    std::vector<SubharmonicRow> rows(samples);
    parallel_chunks(samples, 1, workers, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            auto& row = rows[i];
            row.t = sample_tau(seed, i, T);
            row.center = std::pow(std::abs(zeta_em({0.5, row.t})), 4);
            row.disc = disc_mean_fourth(row.t, r);
            row.ok = row.center <= factor * row.disc;
        }
    });
    return rows;
}

ZetaGridReport discretization_check(std::uint64_t seed, double T, std::size_t samples, int refine,
                                          unsigned workers) {
    if (samples == 0) throw DomainError(kMod, "no samples");
    const auto fine = discretization_grid(T, 2.0, refine);
    const long mid = static_cast<long>(fine.size() / 2);
    ZetaGridReport rep;
    rep.ratios.resize(samples);
    parallel_chunks(samples, 1, workers, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const double tau = sample_tau(seed, i, T);
            double fmax = 0, cmax = 0;
            for (std::size_t j = 0; j < fine.size(); ++j) {
                const double v = std::abs(zeta_critical(tau + fine[j]));
                fmax = std::max(fmax, v);
                // coarse points are every refine-th fine point counted from h = 0
                if ((static_cast<long>(j) - mid) % refine == 0) cmax = std::max(cmax, v);
            }
            rep.ratios[i] = fmax / cmax;
        }
    });
    auto sorted = rep.ratios;
    std::sort(sorted.begin(), sorted.end());
    const auto q = static_cast<std::size_t>(std::ceil(0.99 * static_cast<double>(samples))) - 1;
    rep.C = sorted[std::min(q, samples - 1)];
    rep.max_ratio = sorted.back();
    return rep;
}

std::vector<TailRow> zeta_tail_samples(std::uint64_t seed, double T, std::size_t samples, unsigned workers) {
    const double n = std::log(std::log(T));
    const auto hs = discretization_grid(T, 1.0);
    std::vector<TailRow> rows(samples);
    parallel_chunks(samples, 1, workers, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const double tau = sample_tau(seed, i, T);
            const auto g = max_on_grid(tau, hs);
            rows[i] = {tau, g.h_star, g.max_abs, std::log(g.max_abs) - n + 0.75 * std::log(n)};
        }
    });
    return rows;
}

void write_tail_csv(std::ostream& os, const std::vector<TailRow>& rows) {
    CsvWriter c(os);
    c.header({"tau", "h_star", "max_abs", "y_coordinate"});
    for (const auto& r : rows) c.row(r.tau, r.h_star, r.max_abs, r.y);
}

}  // namespace zlab
