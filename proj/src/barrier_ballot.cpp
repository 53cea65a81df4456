#include "zlab/barrier_ballot.hpp"

#include <fftw3.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <numbers>

#include "zlab/csv.hpp"
#include "zlab/errors.hpp"
#include "zlab/parallel.hpp"

namespace zlab {

namespace {

constexpr const char* kMod = "barrier_ballot";
const double kSigma = std::sqrt(0.5);  // step standard deviation

double Phi(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// log P(Z > x), Z standard normal, accurate far into the tail.
double log_Q(double x) {
    if (x < 30) return std::log(0.5 * std::erfc(x / std::numbers::sqrt2));
    const double x2 = x * x;
    return -0.5 * x2 - std::log(x * std::sqrt(2 * std::numbers::pi)) + std::log1p(-1 / x2 + 3 / (x2 * x2));
}

// log P(a < Z <= b)
double log_normal_bin(double a, double b) {
    if (a >= 0) {
        const double la = log_Q(a), lb = log_Q(b);
        return la + std::log1p(-std::exp(lb - la));
    }
    if (b <= 0) return log_normal_bin(-b, -a);
    return std::log(Phi(b) - Phi(a));
}

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

// Length of the overlap of [a, b] with [lo, hi], divided by (b - a).
double overlap_fraction(double a, double b, double lo, double hi) {
    const double l = std::max(a, lo), r = std::min(b, hi);
    return r > l ? (r - l) / (b - a) : 0.0;
}

std::size_t fft_size(std::size_t n) {
    std::size_t s = 1;
    while (s < n) s <<= 1;
    // 3 * 2^j is also fast and often closer
    if (s / 4 * 3 >= n) return s / 4 * 3;
    return s;
}

// Cell masses of the surviving, tilted walk after k steps, in the frame
// v_j = W_j - j mu. The barrier at step k is left to the caller, which
// intersects it with the endpoint bin (applying both fractions to a cell
// that straddles a shared edge would count the cut twice).
struct DpRun {
    double vlo = 0, h = 0, mu = 0;
    std::vector<double> mass;
};

DpRun run_dp(int k, double mu, double wv_min, double wv_max, const Barrier& b, double mesh) {
    if (k < 1) throw DomainError(kMod, "k must be >= 1");
    if (b.k() != k || static_cast<int>(b.lower.size()) != k) throw StructuralError(kMod, "barrier length differs from k");
    if (!(mesh >= kMinMesh))
        throw ToleranceError(kMod, "mesh " + format_double(mesh) + " points per sd is below the 200 needed for 1e-4");

    DpRun run;
    run.mu = mu;
    run.h = kSigma / mesh;
    const double spread = 8 * kSigma * std::sqrt(static_cast<double>(k));
    run.vlo = std::min(0.0, wv_min) - spread;
    const double vhi = std::max(0.0, wv_max) + spread;
    const std::size_t n = static_cast<std::size_t>(std::ceil((vhi - run.vlo) / run.h)) + 1;
    const double h = run.h;
    auto center = [&](std::size_t i) { return run.vlo + (static_cast<double>(i) + 0.5) * h; };

    auto apply_barrier = [&](std::vector<double>& m, int j) {
        const double shift = j * mu;
        const double up = b.upper[static_cast<std::size_t>(j - 1)] - shift;
        const double lo = b.lower[static_cast<std::size_t>(j - 1)] - shift;
        if (std::isinf(up) && std::isinf(lo)) return;
        for (std::size_t i = 0; i < n; ++i) {
            if (m[i] == 0) continue;
            const double c = center(i);
            if (c - 0.5 * h >= lo && c + 0.5 * h <= up) continue;
            m[i] *= overlap_fraction(c - 0.5 * h, c + 0.5 * h, lo, up);
        }
    };

    // first step from the point 0: exact cell masses
    std::vector<double> m(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double c = center(i);
        m[i] = Phi((c + 0.5 * h) / kSigma) - Phi((c - 0.5 * h) / kSigma);
    }
    if (k > 1) {
        apply_barrier(m, 1);
        // step kernel: point mass at a cell center spread into cells, cut at
        // 8 sd. Binning adds h^2/12 to the variance (Sheppard), so the
        // Gaussian is narrowed by that much.
        const std::size_t half = static_cast<std::size_t>(std::ceil(8 * mesh));
        const std::size_t nk = 2 * half + 1;
        const std::size_t N = fft_size(n + nk);
        const std::size_t nc = N / 2 + 1;
        const double sk = std::sqrt(kSigma * kSigma - h * h / 12);
        std::vector<double> ker(N, 0.0);
        for (std::size_t t = 0; t < nk; ++t) {
            const double d = (static_cast<double>(t) - static_cast<double>(half)) * h;
            ker[t] = Phi((d + 0.5 * h) / sk) - Phi((d - 0.5 * h) / sk);
        }
        double* buf = fftw_alloc_real(N);
        fftw_complex* spec = fftw_alloc_complex(nc);
        fftw_complex* kspec = fftw_alloc_complex(nc);
        fftw_plan fwd, bwd;
        {
            std::lock_guard<std::mutex> lk(fftw_planner_mutex());
            fwd = fftw_plan_dft_r2c_1d(static_cast<int>(N), buf, spec, FFTW_ESTIMATE);
            bwd = fftw_plan_dft_c2r_1d(static_cast<int>(N), spec, buf, FFTW_ESTIMATE);
        }
        std::copy(ker.begin(), ker.end(), buf);
        fftw_execute(fwd);
        std::copy(spec[0], spec[0] + 2 * nc, kspec[0]);
        const double scale = 1.0 / static_cast<double>(N);

        for (int j = 2; j <= k; ++j) {
            std::fill(buf, buf + N, 0.0);
            std::copy(m.begin(), m.end(), buf);
            fftw_execute(fwd);
            for (std::size_t q = 0; q < nc; ++q) {
                const double re = spec[q][0] * kspec[q][0] - spec[q][1] * kspec[q][1];
                const double im = spec[q][0] * kspec[q][1] + spec[q][1] * kspec[q][0];
                spec[q][0] = re * scale;
                spec[q][1] = im * scale;
            }
            fftw_execute(bwd);
            // drift mu per step is absorbed by the frame; out[i] = conv[i + half]
            for (std::size_t i = 0; i < n; ++i) m[i] = std::max(0.0, buf[i + half]);
            if (j < k) apply_barrier(m, j);
        }
        {
            std::lock_guard<std::mutex> lk(fftw_planner_mutex());
            fftw_destroy_plan(fwd);
            fftw_destroy_plan(bwd);
        }
        fftw_free(buf);
        fftw_free(spec);
        fftw_free(kspec);
    }
    run.mass = std::move(m);
    return run;
}

// Tilted walk: increments N(mu, 1/2). dP/dP_tilt = exp(-2 mu W_k + k mu^2).
double log_weight(double W, int k, double mu) { return -2 * mu * W + k * mu * mu; }

BridgeDP bin_from_run(const DpRun& run, int k, double w, const Barrier& b) {
    BridgeDP r;
    r.mesh = kSigma / run.h;
    const double shift = k * run.mu;
    const double lo = std::max(w, b.lower.back()) - shift;
    const double hi = std::min(w + 1, b.upper.back()) - shift;
    // cell average of the weight, mass taken uniform within a cell
    const double mh = run.mu * run.h;
    const double cell_avg = mh == 0 ? 0.0 : std::log(std::sinh(mh) / mh);
    double lmax = -kInf;
    std::vector<std::pair<double, double>> terms;  // (mass * fraction, log weight)
    for (std::size_t i = 0; i < run.mass.size(); ++i) {
        const double c = run.vlo + (static_cast<double>(i) + 0.5) * run.h;
        const double f = hi > lo ? overlap_fraction(c - 0.5 * run.h, c + 0.5 * run.h, lo, hi) : 0.0;
        if (f == 0 || run.mass[i] == 0) continue;
        const double lw = log_weight(c + shift, k, run.mu) + cell_avg;
        terms.emplace_back(run.mass[i] * f, lw);
        lmax = std::max(lmax, lw);
    }
    const double sd = kSigma * std::sqrt(static_cast<double>(k));
    r.log_endpoint = log_normal_bin(w / sd, (w + 1) / sd);
    if (terms.empty()) {
        r.conditional = 0;
        return r;
    }
    CompensatedSum s;
    for (auto& [m, lw] : terms) s.add(m * std::exp(lw - lmax));
    r.log_joint = s.value() > 0 ? lmax + std::log(s.value()) : -kInf;
    r.conditional = std::exp(r.log_joint - r.log_endpoint);
    return r;
}

}  // namespace

double centering_m(double k, double n) {
    if (!(n > 1)) throw DomainError(kMod, "centering needs n > 1");
    return k * (1 - 0.75 * std::log(n) / n);
}

int BarrierProfile::r() const { return static_cast<int>(std::ceil(y / 4)); }

double BarrierProfile::upper(double k) const {
    if (k >= n) throw DomainError(kMod, "barrier needs k < n");
    if (k < r()) return kInf;
    return y + c_upper * (k <= n / 2 ? std::log(k) : std::log(n - k));
}

double BarrierProfile::lower(double k) const {
    if (k >= n) throw DomainError(kMod, "barrier needs k < n");
    if (k < r()) return -kInf;
    return y - c_lower * (k <= n / 2 ? k : n - k);
}

BarrierProfile asymptotic_profile(double y, double n) {
    BarrierProfile p;
    p.y = y;
    p.n = n;
    return p;
}

BarrierProfile surrogate_profile(double y, double n) {
    BarrierProfile p = asymptotic_profile(y, n);
    p.c_upper = 3;
    p.c_lower = 2;
    return p;
}

std::vector<double> c_sequence(const std::vector<double>& levels) {
    std::vector<double> c;
    double prod = 1;
    for (double nl : levels) {
        prod *= 1 + std::exp(-nl);
        c.push_back(prod);
    }
    return c;
}

double high_point_threshold(double y, double n) { return std::exp(y + n) / std::pow(n, 0.75); }

EventFlags event_flags(const FlagInputs& in, const BarrierProfile& prof, const std::vector<double>& levels,
                       const FlagParams& prm) {
    const std::size_t ns = in.nshifts, nk = in.scales.size();
    if (levels.size() < 2) throw StructuralError(kMod, "need at least the levels n_{-1}, n_0");
    if (in.S_tilde.size() != nk * ns) throw StructuralError(kMod, "S~ table has the wrong size");
    const auto c = prof.c_ell.size() >= levels.size() - 1 ? prof.c_ell : c_sequence(levels);

    EventFlags f;
    f.levels = levels.size() - 1;
    f.nshifts = ns;
    for (auto* v : {&f.A, &f.B, &f.C, &f.D, &f.G}) v->assign(f.levels * ns, 0);

    auto find_scale = [&](double x) -> std::size_t {
        for (std::size_t i = 0; i < nk; ++i)
            if (std::abs(in.scales[i] - x) <= 1e-12 * std::max(1.0, std::abs(x))) return i;
        return nk;
    };
    auto missing = [&](std::size_t l, double k, const char* what) {
        throw StructuralError(kMod, std::string("missing ") + what + " at (l=" + std::to_string(l) +
                                        ", k=" + format_double(k) + ")");
    };

    std::vector<std::uint8_t> a(ns, 1), bb(ns, 1), cc(ns, 1), d(ns, 1);
    for (std::size_t l = 0; l < f.levels; ++l) {
        const double base = levels[l], top = levels[l + 1];
        const std::size_t ib = find_scale(base);
        if (ib == nk) missing(l, base, "base scale n_{l-1}");
        const double additive = std::exp(-prm.d_exp * (prof.n - base));
        for (std::size_t i = 0; i < nk; ++i) {
            const double k = in.scales[i];
            if (!(k > base && k <= top)) continue;
            const double mk = centering_m(k, prof.n);
            const double U = prof.upper(k), L = prof.lower(k);
            const bool have_d = in.zeta_e.size() == nk * ns && in.zeta_m.size() == nk * ns;
            for (std::size_t h = 0; h < ns; ++h) {
                const cplx s = in.S_tilde[i * ns + h];
                if (std::isnan(s.real())) missing(l, k, "S~");
                if (std::abs(s - in.S_tilde[ib * ns + h]) > prm.a_const * (top - base)) a[h] = 0;
                if (!(s.real() <= mk + U)) bb[h] = 0;
                if (!(s.real() > mk + L)) cc[h] = 0;
                if (!have_d) missing(l, k, "zeta values for the D condition");
                const double ze = in.zeta_e[i * ns + h], zm = in.zeta_m[i * ns + h];
                if (std::isnan(ze) || std::isnan(zm)) missing(l, k, "zeta values for the D condition");
                if (!(ze <= c[l] * zm + additive)) d[h] = 0;
            }
        }
        for (std::size_t h = 0; h < ns; ++h) {
            const std::size_t q = l * ns + h;
            f.A[q] = a[h];
            f.B[q] = bb[h];
            f.C[q] = cc[h];
            f.D[q] = d[h];
            f.G[q] = a[h] & bb[h] & cc[h] & d[h];
        }
    }
    if (in.zeta_abs.size() == ns) {
        const double V = high_point_threshold(prof.y, prof.n);
        f.H.resize(ns);
        for (std::size_t h = 0; h < ns; ++h) f.H[h] = in.zeta_abs[h] > V;
    }
    return f;
}

Barrier Barrier::none(int k) {
    Barrier b;
    b.upper.assign(static_cast<std::size_t>(k), kInf);
    b.lower.assign(static_cast<std::size_t>(k), -kInf);
    return b;
}

Barrier Barrier::constant(int k, double y) {
    Barrier b = none(k);
    std::fill(b.upper.begin(), b.upper.end(), y);
    return b;
}

Barrier Barrier::from_profile(int k, const BarrierProfile& p) {
    Barrier b = none(k);
    const int r = p.r();
    for (int j = std::max(r, 1); j <= k; ++j) {
        const double mj = centering_m(j, p.n);
        b.upper[static_cast<std::size_t>(j - 1)] = mj + p.upper(j);
        if (j == r) b.lower[static_cast<std::size_t>(j - 1)] = mj + p.lower(j);
    }
    return b;
}

Barrier BarrierFunction::barrier() const {
    Barrier b = Barrier::none(k);
    for (int j = 1; j <= k; ++j) b.upper[static_cast<std::size_t>(j - 1)] = f(j);
    return b;
}

bool BarrierFunction::envelopes_hold(double theta, double c1) const {
    if (static_cast<int>(g.size()) != k + 1) return false;
    if (std::abs(g.front()) > 1e-12 || std::abs(g.back()) > 1e-12) return false;
    auto mn = [&](int x) { return static_cast<double>(std::min(x + 1, k - x + 1)); };
    for (int x = 0; x <= k; ++x) {
        const std::size_t i = static_cast<std::size_t>(x);
        double d1;
        if (x == 0) d1 = g[1] - g[0];
        else if (x == k) d1 = g[i] - g[i - 1];
        else d1 = 0.5 * (g[i + 1] - g[i - 1]);
        if (!(std::abs(d1) < std::pow(mn(x), theta - 1) / c1)) return false;
        if (x > 0 && x < k) {
            const double d2 = g[i + 1] - 2 * g[i] + g[i - 1];
            if (d2 > 1e-12) return false;
            if (!(d2 > -c1 * std::pow(mn(x), theta - 2))) return false;
        }
    }
    return true;
}

BarrierFunction sample_barrier_function(Xoshiro256pp& rng, int k, double theta, double c1, double y) {
    if (k < 1 || !(theta >= 0 && theta < 0.5) || !(c1 > 0)) throw DomainError(kMod, "barrier function parameters");
    BarrierFunction bf;
    bf.k = k;
    bf.y = y;
    double amax = 0;
    if (theta > 0) amax = 0.5 * std::min(1 / (c1 * theta), c1 / (2 * theta * (1 - theta)));
    const double a = amax * rng.uniform();
    bf.alpha = (2 * rng.uniform() - 1) * 0.5 / c1;
    bf.g.resize(static_cast<std::size_t>(k) + 1);
    const double end = std::pow(k + 1.0, theta);
    for (int x = 0; x <= k; ++x)
        bf.g[static_cast<std::size_t>(x)] = a * (std::pow(x + 1.0, theta) + std::pow(k - x + 1.0, theta) - 1 - end);
    bf.g.front() = bf.g.back() = 0;
    return bf;
}

double BridgeDP::joint() const { return std::exp(log_joint); }

std::vector<BridgeDP> bridge_survival_dp_bins(int k, const std::vector<double>& ws, const Barrier& b, double mesh) {
    std::vector<BridgeDP> out(ws.size());
    if (ws.empty()) return out;
    // One tilted run per cluster of bins no wider than 4 sd of W_k: far from
    // the tilt centre the tilted mass sinks below the FFT round-off floor.
    std::vector<std::size_t> order(ws.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) { return ws[a] < ws[c]; });
    const double width = 4 * kSigma * std::sqrt(static_cast<double>(k));
    for (std::size_t g0 = 0; g0 < order.size();) {
        std::size_t g1 = g0 + 1;
        while (g1 < order.size() && ws[order[g1]] - ws[order[g0]] <= width) ++g1;
        const double lo = ws[order[g0]], hi = ws[order[g1 - 1]];
        const double mu = (0.5 * (lo + hi) + 0.5) / k;
        const auto run = run_dp(k, mu, lo - k * mu, hi + 1 - k * mu, b, mesh);
        for (std::size_t i = g0; i < g1; ++i) out[order[i]] = bin_from_run(run, k, ws[order[i]], b);
        g0 = g1;
    }
    return out;
}

BridgeDP bridge_survival_dp(int k, double w, const Barrier& b, double mesh) {
    return bridge_survival_dp_bins(k, {w}, b, mesh).front();
}

double bridge_survival_pinned(int k, double w, const Barrier& b, double mesh) {
    if (b.k() == k && (w > b.upper.back() || w <= b.lower.back())) return 0.0;
    const double mu = w / k;
    const auto run = run_dp(k, mu, 0.0, 0.0, b, mesh);
    // density of the tilted survivor at v = 0, linear between cell centers
    const double pos = (0.0 - run.vlo) / run.h - 0.5;
    const std::size_t i = static_cast<std::size_t>(std::floor(pos));
    const double t = pos - static_cast<double>(i);
    const double dens = ((1 - t) * run.mass[i] + t * run.mass[i + 1]) / run.h;
    // unconditioned tilted endpoint density at its mean is 1 / sqrt(pi k)
    return dens * std::sqrt(std::numbers::pi * k);
}

BridgeMC bridge_survival_mc(std::uint64_t seed, int k, double w, const Barrier& b, std::uint64_t M,
                            unsigned workers) {
    if (M < 10000) throw DomainError(kMod, "Monte Carlo needs M >= 1e4 paths");
    if (b.k() != k) throw StructuralError(kMod, "barrier length differs from k");
    std::atomic<std::uint64_t> hits{0}, surv{0};
    parallel_chunks(M, 4096, workers, [&](std::size_t p0, std::size_t p1) {
        std::uint64_t lh = 0, ls = 0;
        for (std::size_t p = p0; p < p1; ++p) {
            auto rng = seed_stream(seed, p);
            double W = 0;
            bool alive = true;
            for (int j = 0; j < k; ++j) {
                W += kSigma * rng.normal();
                if (W > b.upper[static_cast<std::size_t>(j)] || W <= b.lower[static_cast<std::size_t>(j)]) alive = false;
            }
            if (W > w && W <= w + 1) {
                ++lh;
                ls += alive;
            }
        }
        hits += lh;
        surv += ls;
    });
    BridgeMC r;
    r.paths = M;
    r.hits = hits.load();
    r.survivors = surv.load();
    if (r.hits < 100)
        throw InsufficientSample(kMod, "only " + std::to_string(r.hits) + " paths ended in the bin (need 100)");
    r.conditional = binomial_ci(r.survivors, r.hits);
    return r;
}

double ballot_bound(int k, double y, double w, const BarrierProfile& p) {
    const double kk = k;
    return (y + 1) * (p.upper(kk) + centering_m(kk, p.n) - w + 1) * std::pow(kk, -1.5) * std::exp(-w * w / kk);
}

double constant_barrier_bound(double m, double z1, double z2) { return (z1 + 1) * (z1 - z2 + 1) / m; }

void write_ballot_csv(std::ostream& os, const std::vector<BallotRow>& rows) {
    CsvWriter c(os);
    c.header({"k", "y", "w", "dp", "mc", "bound", "ratio"});
    for (const auto& r : rows) c.row(r.k, r.y, r.w, r.dp, r.mc, r.bound, r.ratio);
}

}  // namespace zlab
