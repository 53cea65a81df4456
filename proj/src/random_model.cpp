#include "zlab/random_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "zlab/csv.hpp"
#include "zlab/errors.hpp"
#include "zlab/parallel.hpp"
#include "zlab/simd.hpp"

namespace zlab {

namespace {

constexpr const char* kMod = "random_model";
constexpr double kTwoPi = 2 * std::numbers::pi;

double Phi(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

std::size_t count_in(const PrimeTable& t, double k_start, double k) {
    return primes_in_log_range(t, k_start, k).size();
}

}  // namespace

double X_p(double theta, std::uint64_t p, double h) {
    const double pd = static_cast<double>(p);
    const double phi = theta - reduce_2pi(static_cast<long double>(h) * std::log(static_cast<long double>(p)));
    return std::cos(phi) / std::sqrt(pd) + std::cos(2 * phi) / (2 * pd);
}

double sample_X_p(Xoshiro256pp& rng, std::uint64_t p, double h) { return X_p(kTwoPi * rng.uniform(), p, h); }

double X_p_variance(std::uint64_t p) {
    const double pd = static_cast<double>(p);
    return 1 / (2 * pd) + 1 / (8 * pd * pd);
}

RandomEulerPath sample_euler_path(Xoshiro256pp& rng, const PrimeTable& t, const EulerModelConfig& cfg) {
    if (cfg.scales.empty()) throw StructuralError(kMod, "no scales");
    const auto r = primes_in_log_range(t, cfg.k_start, cfg.scales.back());
    std::vector<double> theta(r.size());
    for (auto& th : theta) th = kTwoPi * rng.uniform();
    return euler_path_from_angles(t, cfg, std::move(theta));
}

RandomEulerPath euler_path_from_angles(const PrimeTable& t, const EulerModelConfig& cfg, std::vector<double> theta) {
    if (cfg.scales.empty()) throw StructuralError(kMod, "no scales");
    if (!std::is_sorted(cfg.scales.begin(), cfg.scales.end())) throw StructuralError(kMod, "scales must increase");
    RandomEulerPath path;
    path.range = primes_in_log_range(t, cfg.k_start, cfg.scales.back());
    if (theta.size() != path.range.size()) throw StructuralError(kMod, "one angle per prime is required");
    path.theta = std::move(theta);
    path.scales = cfg.scales;
    path.grid = cfg.grid;
    const std::size_t np = path.range.size(), ns = cfg.grid.count, nk = cfg.scales.size();
    path.values.assign(nk * ns, 0.0);

    std::vector<double> logp(np), c1re(np), c1im(np), c2re(np), c2im(np);
    for (std::size_t i = 0; i < np; ++i) {
        const double p = static_cast<double>(t.primes[path.range.begin + i]);
        logp[i] = std::log(p);
        const double th = path.theta[i];
        c1re[i] = std::cos(th) / std::sqrt(p);
        c1im[i] = std::sin(th) / std::sqrt(p);
        c2re[i] = std::cos(2 * th) / (2 * p);
        c2im[i] = std::sin(2 * th) / (2 * p);
    }
    std::vector<std::size_t> cut(nk);
    for (std::size_t s = 0; s < nk; ++s) cut[s] = count_in(t, cfg.k_start, cfg.scales[s]);

    const auto& K = simd::kernels();
    parallel_chunks(ns, simd::kTile, cfg.workers, [&](std::size_t j0, std::size_t j1) {
        std::vector<double> re(j1 - j0, 0.0), im(j1 - j0, 0.0);
        std::size_t done = 0;
        for (std::size_t s = 0; s < nk; ++s) {
            if (cut[s] > done) {
                simd::RotateArgs a;
                a.logp = logp.data() + done;
                a.c1re = c1re.data() + done;
                a.c1im = c1im.data() + done;
                a.c2re = c2re.data() + done;
                a.c2im = c2im.data() + done;
                a.nprimes = cut[s] - done;
                a.h0 = cfg.grid.h0;
                a.dh = cfg.grid.dh;
                a.j_begin = j0;
                a.j_end = j1;
                a.out_re = re.data();
                a.out_im = im.data();
                K.rotate_accumulate(a);
                done = cut[s];
            }
            std::copy(re.begin(), re.end(), path.values.begin() + static_cast<std::ptrdiff_t>(s * ns + j0));
        }
    });
    return path;
}

GaussianWalk sample_gaussian_walk(Xoshiro256pp& rng, std::size_t steps) {
    GaussianWalk w;
    w.increments.resize(steps);
    w.sums.resize(steps);
    double s = 0;
    for (std::size_t i = 0; i < steps; ++i) {
        w.increments[i] = std::sqrt(0.5) * rng.normal();
        s += w.increments[i];
        w.sums[i] = s;
    }
    return w;
}

ModelSampler::ModelSampler(const PrimeTable& t, double k_start, std::vector<double> marks, double h,
                           std::uint64_t exact_limit)
    : marks_k_(std::move(marks)) {
    if (marks_k_.empty()) throw StructuralError(kMod, "sampler needs at least one mark");
    if (!std::is_sorted(marks_k_.begin(), marks_k_.end())) throw StructuralError(kMod, "marks must increase");
    const auto all = primes_in_log_range(t, k_start, marks_k_.back());
    total_ = all.size();
    std::size_t n_exact = total_;
    if (exact_limit > 0) {
        const auto it = std::upper_bound(t.primes.begin() + static_cast<std::ptrdiff_t>(all.begin),
                                         t.primes.begin() + static_cast<std::ptrdiff_t>(all.end), exact_limit);
        n_exact = static_cast<std::size_t>(it - t.primes.begin()) - all.begin;
    }
    a_.resize(n_exact);
    b_.resize(n_exact);
    phase_.resize(n_exact);
    for (std::size_t i = 0; i < n_exact; ++i) {
        const std::uint64_t p = t.primes[all.begin + i];
        a_[i] = 1 / std::sqrt(static_cast<double>(p));
        b_[i] = 1 / static_cast<double>(p);
        // X = a cos(theta - h log p) + ...; the kernel takes the shift in turns
        phase_[i] = reduce_2pi(static_cast<long double>(h) * std::log(static_cast<long double>(p))) / kTwoPi;
    }
    CompensatedSum tail, tot;
    std::size_t i = 0;
    for (double k : marks_k_) {
        const std::size_t idx = count_in(t, k_start, k);
        for (; i < idx; ++i) {
            const double v = X_p_variance(t.primes[all.begin + i]);
            tot.add(v);
            if (i >= n_exact) tail.add(v);
        }
        exact_marks_.push_back(std::min(idx, n_exact));
        gauss_var_.push_back(tail.value());
        var_total_.push_back(tot.value());
    }
}

std::vector<double> ModelSampler::sample(std::uint64_t seed, std::size_t M, unsigned workers) const {
    const std::size_t nm = marks_k_.size();
    std::vector<double> out(M * nm, 0.0);
    const auto& K = simd::kernels();
    simd::EulerPathArgs args;
    args.a = a_.data();
    args.b = b_.data();
    args.phase = phase_.data();
    args.nprimes = a_.size();
    args.marks = exact_marks_.data();
    args.nmarks = nm;
    parallel_chunks(M, 256, workers, [&](std::size_t q0, std::size_t q1) {
        std::vector<Xoshiro256pp> streams;
        streams.reserve(q1 - q0);
        for (std::size_t q = q0; q < q1; ++q) streams.push_back(seed_stream(seed, q));
        K.euler_paths(args, streams.data(), q1 - q0, out.data() + q0 * nm);
        for (std::size_t q = q0; q < q1; ++q) {
            auto& g = streams[q - q0];
            double prev = 0, cum = 0;
            for (std::size_t m = 0; m < nm; ++m) {
                const double dv = gauss_var_[m] - prev;
                prev = gauss_var_[m];
                if (dv > 0) cum += std::sqrt(dv) * g.normal();
                out[q * nm + m] += cum;
            }
        }
    });
    return out;
}

double laplace_per_prime(std::uint64_t p, double z, int nodes) {
    CompensatedSum s;
    for (int i = 0; i < nodes; ++i) s.add(std::exp(z * X_p(kTwoPi * i / nodes, p, 0.0)));
    return s.value() / nodes;
}

LaplaceReport laplace_check(std::uint64_t seed, const PrimeTable& t, double j, double k, double lambda,
                            std::size_t M, double C, unsigned workers) {
    if (std::abs(lambda) > 10) throw DomainError(kMod, "laplace check needs |lambda| <= 10");
    const ModelSampler smp(t, j, {k});
    auto xs = smp.sample(seed, M, workers);
    for (auto& x : xs) x = std::exp(lambda * x);
    LaplaceReport r;
    r.estimate = mean_ci(xs);
    r.bound = std::exp((k - j + C) * lambda * lambda / 4);
    r.pass = r.estimate.lo <= r.bound;
    return r;
}

std::vector<MomentRow> moment_match(std::uint64_t seed, const PrimeTable& t, double j, double k,
                                    const std::vector<int>& qs, std::size_t M, unsigned workers) {
    const ModelSampler smp(t, j, {k});
    const auto xs = smp.sample(seed, M, workers);
    std::vector<MomentRow> rows;
    for (int q : qs) {
        CompensatedSum s;
        for (double x : xs) s.add(std::pow(x, 2 * q));
        MomentRow r;
        r.q = q;
        r.moment = s.value() / static_cast<double>(M);
        // (2q)! / (2^q q!) = (2q - 1)!!
        double dfact = 1;
        for (int i = 1; i < 2 * q; i += 2) dfact *= i;
        r.gaussian = dfact * std::pow((k - j) / 2, q);
        r.ratio = r.moment / r.gaussian;
        rows.push_back(r);
    }
    return rows;
}

GaussianityReport gaussian_distance(const std::vector<double>& xs_in, double beta, int endpoints) {
    if (xs_in.empty() || endpoints < 2) throw DomainError(kMod, "empty sample");
    std::vector<double> xs = xs_in;
    std::sort(xs.begin(), xs.end());
    const std::size_t M = xs.size();
    const double sd = std::sqrt(beta);
    // cut points: value, empirical count <= value, Gaussian CDF
    struct Cut {
        double F_emp, F_gauss;
    };
    std::vector<Cut> cuts;
    for (int i = 0; i < endpoints; ++i) {
        if (i == 0) {
            cuts.push_back({0.0, 0.0});
            continue;
        }
        if (i == endpoints - 1) {
            cuts.push_back({1.0, 1.0});
            continue;
        }
        const std::size_t idx = std::min(M - 1, static_cast<std::size_t>(static_cast<double>(i) / (endpoints - 1) * M));
        const double q = xs[idx];
        const auto cnt = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), q) - xs.begin());
        cuts.push_back({static_cast<double>(cnt) / M, Phi(q / sd)});
    }
    GaussianityReport r;
    r.beta = beta;
    for (std::size_t a = 0; a < cuts.size(); ++a)
        for (std::size_t b = a + 1; b < cuts.size(); ++b) {
            const double pe = cuts[b].F_emp - cuts[a].F_emp;
            const double pg = cuts[b].F_gauss - cuts[a].F_gauss;
            r.distance = std::max(r.distance, std::abs(pe - pg));
            ++r.intervals;
        }
    return r;
}

GaussianityReport increment_gaussianity(std::uint64_t seed, const PrimeTable& t, double j, double k, std::size_t M,
                                        unsigned workers, std::uint64_t exact_limit) {
    if (M < 10000) throw DomainError(kMod, "gaussianity check needs M >= 1e4");
    const ModelSampler smp(t, j, {k}, 0.0, exact_limit);
    auto r = gaussian_distance(smp.sample(seed, M, workers), smp.variance(0));
    r.primes = smp.total_primes();
    return r;
}

std::vector<DensityRow> density_table(const std::vector<double>& xs_in, double r, double Delta) {
    std::vector<double> xs = xs_in;
    std::sort(xs.begin(), xs.end());
    const std::size_t M = xs.size();
    const int imax = static_cast<int>(std::floor(2 * std::sqrt(r) * Delta + 1e-12));
    std::vector<DensityRow> rows;
    for (int i = -imax; i <= imax; ++i) {
        DensityRow row;
        row.v = i / Delta;
        const double hi = (i + 1) / Delta;
        const auto lo_it = std::lower_bound(xs.begin(), xs.end(), row.v);
        const auto hi_it = std::lower_bound(xs.begin(), xs.end(), hi);
        row.prob = binomial_ci(static_cast<std::uint64_t>(hi_it - lo_it), M);
        row.asym = std::exp(-row.v * row.v / r) / (Delta * std::sqrt(r));
        row.ratio = row.prob.value / row.asym;
        rows.push_back(row);
    }
    return rows;
}

std::vector<DensityRow> density_check(std::uint64_t seed, const PrimeTable& t, double r, double Delta,
                                      std::size_t M, double k_start, unsigned workers) {
    const ModelSampler smp(t, k_start, {r});
    return density_table(smp.sample(seed, M, workers), r, Delta);
}

std::size_t HierarchySpec::leaves() const {
    std::size_t n = 1;
    for (int b : branching) {
        // saturate instead of wrapping for very deep trees
        if (n > std::numeric_limits<std::size_t>::max() / static_cast<std::size_t>(b)) return std::numeric_limits<std::size_t>::max();
        n *= static_cast<std::size_t>(b);
    }
    return n;
}

HierarchySpec hierarchy_e(int n) {
    if (n < 1) throw DomainError(kMod, "depth must be >= 1");
    HierarchySpec s;
    s.n = n;
    double logN = 0;
    for (int l = 1; l <= n; ++l) {
        const int b = std::abs(logN + std::log(3.0) - l) < std::abs(logN + std::log(2.0) - l) ? 3 : 2;
        logN += std::log(static_cast<double>(b));
        s.branching.push_back(b);
        s.variance.push_back(0.5);
    }
    return s;
}

HierarchySpec hierarchy_binary(int n) {
    if (n < 1) throw DomainError(kMod, "depth must be >= 1");
    HierarchySpec s;
    s.n = n;
    const int L = static_cast<int>(std::lround(n / std::log(2.0)));
    s.branching.assign(static_cast<std::size_t>(L), 2);
    s.variance.assign(static_cast<std::size_t>(L), 0.5 * std::log(2.0));
    return s;
}

namespace {

struct FieldWork {
    std::vector<double> cur, next, g;
};

void check_spec(const HierarchySpec& s) {
    if (s.branching.size() != s.variance.size()) throw StructuralError(kMod, "branching and variance differ in length");
    if (s.leaves() > kMaxLeaves) throw CapacityError(kMod, std::to_string(s.leaves()) + " leaves exceed 1e7");
}

// Runs the field level by level; the last level is handed to `last` instead
// of being stored, so the maximum needs no leaf array.
template <class Last>
void run_field(const HierarchySpec& s, std::uint64_t seed, std::uint64_t run, FieldWork& w, Last&& last) {
    std::array<Xoshiro256pp, 4> lanes;
    for (std::uint64_t l = 0; l < 4; ++l) lanes[l] = seed_stream(seed, 4 * run + l);
    const auto& K = simd::kernels();
    w.cur.assign(1, 0.0);
    for (std::size_t lev = 0; lev < s.branching.size(); ++lev) {
        const std::size_t b = static_cast<std::size_t>(s.branching[lev]);
        const std::size_t cnt = w.cur.size() * b;
        w.g.resize((cnt + 7) / 8 * 8);
        K.gaussian_fill(lanes.data(), w.g.data(), w.g.size());
        const double sd = std::sqrt(s.variance[lev]);
        if (lev + 1 == s.branching.size()) {
            last(w.cur, w.g, b, sd);
            return;
        }
        w.next.resize(cnt);
        for (std::size_t i = 0; i < w.cur.size(); ++i)
            for (std::size_t c = 0; c < b; ++c) w.next[i * b + c] = w.cur[i] + sd * w.g[i * b + c];
        w.cur.swap(w.next);
    }
}

}  // namespace

std::vector<double> sample_field(const HierarchySpec& s, std::uint64_t seed, std::uint64_t run) {
    check_spec(s);
    FieldWork w;
    std::vector<double> leaves;
    if (s.branching.empty()) return {0.0};
    run_field(s, seed, run, w, [&](const std::vector<double>& cur, const std::vector<double>& g, std::size_t b, double sd) {
        leaves.resize(cur.size() * b);
        for (std::size_t i = 0; i < cur.size(); ++i)
            for (std::size_t c = 0; c < b; ++c) leaves[i * b + c] = cur[i] + sd * g[i * b + c];
    });
    return leaves;
}

double brw_centering(double n) { return n - 0.75 * std::log(n); }

std::vector<double> sample_hierarchical(const HierarchySpec& s, std::uint64_t seed, std::size_t runs,
                                        unsigned workers) {
    check_spec(s);
    if (s.branching.empty()) throw DomainError(kMod, "empty hierarchy");
    const double m = brw_centering(s.n);
    std::vector<double> out(runs);
    parallel_chunks(runs, 8, workers, [&](std::size_t r0, std::size_t r1) {
        FieldWork w;
        for (std::size_t r = r0; r < r1; ++r) {
            double mx = -INFINITY;
            run_field(s, seed, r, w, [&](const std::vector<double>& cur, const std::vector<double>& g, std::size_t b, double sd) {
                for (std::size_t i = 0; i < cur.size(); ++i) {
                    double gm = g[i * b];
                    for (std::size_t c = 1; c < b; ++c) gm = std::max(gm, g[i * b + c]);
                    mx = std::max(mx, cur[i] + sd * gm);
                }
            });
            out[r] = mx - m;
        }
    });
    return out;
}

int tree_distance(const HierarchySpec& s, std::size_t a, std::size_t b) {
    const int depth = static_cast<int>(s.branching.size());
    // a leaf's ancestor at level l is its index divided by the leaves below l
    std::size_t below = s.leaves();
    for (int l = 0; l < depth; ++l) {
        below /= static_cast<std::size_t>(s.branching[static_cast<std::size_t>(l)]);
        if (a / below != b / below) return depth - l;
    }
    return 0;
}

TailFit tail_shape(const std::vector<double>& centered, const std::vector<double>& ys) {
    TailFit f;
    f.ys = ys;
    f.median = median(centered);
    const double M = static_cast<double>(centered.size());
    std::vector<double> fx, fy, fw;
    for (double y : ys) {
        const auto cnt = std::count_if(centered.begin(), centered.end(), [&](double x) { return x > y; });
        const double p = static_cast<double>(cnt) / M;
        f.probs.push_back(p);
        if (p > 0 && p < 1) {
            fx.push_back(y);
            fy.push_back(std::log(p));
            // Var log p_hat ~ (1 - p) / (M p)
            fw.push_back(M * p / (1 - p));
        }
    }
    if (fx.size() >= 2) {
        f.fit = fit_line(fx, fy, fw);
        f.ols = fit_line(fx, fy);
    }
    return f;
}

void write_density_csv(std::ostream& os, const std::vector<DensityRow>& rows, double Delta) {
    CsvWriter c(os);
    c.header({"bin_lo", "bin_hi", "prob", "ci_lo", "ci_hi", "asymptotic", "ratio"});
    for (const auto& r : rows) c.row(r.v, r.v + 1 / Delta, r.prob.value, r.prob.lo, r.prob.hi, r.asym, r.ratio);
}

}  // namespace zlab
