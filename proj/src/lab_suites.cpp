#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "zlab/barrier_ballot.hpp"
#include "zlab/csv.hpp"
#include "zlab/dirichlet_walk.hpp"
#include "zlab/errors.hpp"
#include "zlab/harmonic_kit.hpp"
#include "zlab/lab.hpp"
#include "zlab/mollifier.hpp"
#include "zlab/moment_local.hpp"
#include "zlab/random_model.hpp"
#include "zlab/rng.hpp"
#include "zlab/zeta_eval.hpp"

namespace zlab::lab {

namespace {

constexpr double kTwoPi = 6.283185307179586;

// Independent seed for a sub-experiment, so two parts of one suite never
// share (seed, index) stream pairs.
std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t tag) {
    return seed ^ (0x9E3779B97F4A7C15ull * (tag + 1));
}

class Clock {
public:
    double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

private:
    std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

std::string fmt(double x) { return format_double(x); }

void runtime_criterion(Context& ctx, int id, const Clock& c, double limit_s) {
    const double s = c.seconds();
    ctx.metric("seconds", s);
    ctx.criterion(id, "runtime", s < limit_s, fmt(s) + " s (limit " + fmt(limit_s) + " s)");
}

// ---- mertens ----

void mertens_suite(Context& ctx) {
    const Clock clock;
    const double a = ctx.num("a"), b = ctx.num("b");
    const PrimeTable& t = ctx.primes();
    const double sum = mertens_sum(t, a, b);
    const double secs = clock.seconds();
    const double target = std::log(std::log(b)) - std::log(std::log(a));
    const double err = std::abs(sum - target);
    ctx.metric("sum", sum);
    ctx.metric("loglog_difference", target);
    ctx.metric("abs_error", err);
    ctx.metric("seconds", secs);
    ctx.criterion(1, "value", err <= 0.01, "sum " + fmt(sum) + ", loglog difference " + fmt(target));
    ctx.criterion(1, "runtime", secs < 60, fmt(secs) + " s for sieve and sum (limit 60 s)");

    std::ostringstream os;
    CsvWriter w(os);
    w.header({"a", "b", "sum", "loglog_difference", "error"});
    for (double x = a * 10; x <= b * (1 + 1e-12); x *= 10) {
        const double s = mertens_sum(t, a, x), d = std::log(std::log(x)) - std::log(std::log(a));
        w.row(a, x, s, d, s - d);
    }
    ctx.table("decades", os.str());
}

// ---- mollifier_suite ----

void mollifier_suite(Context& ctx) {
    const PrimeTable& t = ctx.primes();
    const std::size_t n = ctx.count("configs");
    const double tau_lo = ctx.num("tau_lo"), tau_hi = ctx.num("tau_hi"), k_max = ctx.num("k_max");
    std::ostringstream os;
    CsvWriter w(os);
    w.header({"config", "tau", "j", "k", "primes", "lhs", "rhs", "residual"});
    double worst = 0;
    for (std::size_t i = 0; i < n; ++i) {
        auto g = seed_stream(ctx.seed(), i);
        const double tau = tau_lo + (tau_hi - tau_lo) * g.uniform();
        double j = k_max * g.uniform(), k = k_max * g.uniform();
        if (j > k) std::swap(j, k);
        const auto e = euler_product_check(t, j, k, cplx(0.5, tau));
        worst = std::max(worst, e.residual);
        w.row(static_cast<long long>(i), tau, j, k, static_cast<long long>(primes_in_log_range(t, j, k).size()), e.lhs,
              e.rhs, e.residual);
    }
    ctx.table("euler_identity", os.str());
    ctx.metric("max_residual", worst);
    ctx.criterion(2, "euler_identity", worst <= 1e-10,
                  "max residual " + fmt(worst) + " over " + std::to_string(n) + " configurations (limit 1e-10)");

    // The mollifier itself: identity gap of the unrestricted product and the
    // holding fraction once Omega is capped.
    MollifierSpec spec;
    spec.p_lo = ctx.num("moll_p_lo");
    spec.p_hi = ctx.num("moll_p_hi");
    std::vector<double> taus(ctx.count("moll_taus"));
    for (std::size_t i = 0; i < taus.size(); ++i)
        taus[i] = tau_lo + (tau_hi - tau_lo) * seed_stream(sub_seed(ctx.seed(), 1), i).uniform();
    MollifierCheckParams prm;
    const auto full = mollifier_approx_check(t, spec, taus, prm);
    ctx.metric("mollifier_identity_gap", full.max_identity_gap);
    spec.omega_cap = static_cast<int>(ctx.count("moll_omega_cap"));
    prm.slack = 1.0 / std::log(std::max(spec.p_lo, 3.0));
    prm.additive = ctx.num("moll_additive");
    const auto capped = mollifier_approx_check(t, spec, taus, prm);
    ctx.metric("capped_holding_fraction", capped.fraction);
}

// ---- fourth_moment_suite ----

void fourth_moment_suite(Context& ctx) {
    const Clock clock;
    const ShiftVector z0;
    double vanish = 0;
    for (std::uint64_t p : {11, 101, 1009})
        for (int v = 1; v <= 3; ++v) {
            vanish = std::max(vanish, std::abs(local_factor(p, v, 0, z0)));
            vanish = std::max(vanish, std::abs(local_factor(p, 0, v, z0)));
        }
    ctx.metric("local_factor_max_abs", vanish);
    ctx.criterion(3, "local_factor_vanishes", vanish <= 1e-10, "max |P| " + fmt(vanish) + " (limit 1e-10)");

    const std::vector<std::uint64_t> ps{2, 3, 11, 101, 1009, 10007};
    double newton = 0, b1 = 0;
    for (auto p : ps) {
        for (int l = 2; l <= 6; ++l) {
            double s = 0;
            for (int k = 0; k <= l; ++k) s += f_mult(k) * B_zero(p, l - k);
            newton = std::max(newton, std::abs(s));
        }
        b1 = std::max(b1, std::abs(B_zero(p, 1) * (1 + 1.0 / static_cast<double>(p)) - 2));
    }
    ctx.metric("newton_identity_max", newton);
    ctx.metric("B0_p_identity_max", b1);
    ctx.criterion(3, "newton_identity", newton <= 1e-12, "max |sum f B_0| " + fmt(newton) + " (limit 1e-12)");
    ctx.criterion(3, "B0_p", b1 <= 1e-12, "max |B_0(p)(1 + 1/p) - 2| " + fmt(b1) + " (limit 1e-12)");

    std::vector<IdentityRow> rows;
    double worst = 0;
    const std::size_t reps = ctx.count("shift_reps");
    std::uint64_t idx = 0;
    for (auto p : ps)
        for (int a = 0; a <= 4; ++a)
            for (double rad : ctx.list("radii"))
                for (std::size_t rep = 0; rep < reps; ++rep) {
                    auto g = seed_stream(ctx.seed(), idx++);
                    ShiftVector z;
                    for (auto& x : z.z) x = std::polar(rad, kTwoPi * g.uniform());
                    const double r = std::abs(B_series(p, a, z) - B_closed(p, a, z));
                    worst = std::max(worst, r);
                    rows.push_back({p, a, z.l1(), r});
                }
    ctx.metric("closed_vs_series_max", worst);
    ctx.criterion(3, "closed_vs_series", worst <= 1e-8,
                  "max |B_series - B_closed| " + fmt(worst) + " over " + std::to_string(rows.size()) + " points (limit 1e-8)");
    std::ostringstream os;
    write_identity_csv(os, rows);
    ctx.table("closed_vs_series", os.str());
    runtime_criterion(ctx, 3, clock, 10);
}

// ---- poisson_suite ----

void poisson_suite(Context& ctx) {
    const Clock clock;
    const PoissonWindow V{ctx.num("eps"), 1e-14, &default_ingham()};
    const std::size_t n = ctx.count("polys"), max_len = ctx.count("max_length");
    if (max_len < 2) throw UsageError("lab_cli", "max_length must be at least 2");
    const double t_max = ctx.num("t_max");
    std::ostringstream os;
    CsvWriter w(os);
    w.header({"poly", "length", "t", "h0", "rel_error"});
    double worst = 0;
    for (std::size_t i = 0; i < n; ++i) {
        auto g = seed_stream(ctx.seed(), i);
        const std::size_t N = 2 + std::min<std::size_t>(max_len - 2, static_cast<std::size_t>(g.uniform() * (max_len - 1)));
        std::vector<cplx> c(N);
        for (auto& x : c) x = cplx(g.normal(), g.normal());
        const double t = t_max * g.uniform(), h0 = 4 * g.uniform() - 2;
        const cplx rec = poisson_reconstruct(c, t, h0, V), direct = dirichlet_eval(c, t + h0);
        const double e = std::abs(rec - direct) / std::abs(direct);
        worst = std::max(worst, e);
        w.row(static_cast<long long>(i), static_cast<long long>(N), t, h0, e);
    }
    ctx.table("reconstruction", os.str());
    ctx.metric("max_rel_error", worst);
    ctx.criterion(4, "reconstruction", worst <= 1e-9,
                  "max relative error " + fmt(worst) + " over " + std::to_string(n) + " polynomials (limit 1e-9)");
    runtime_criterion(ctx, 4, clock, 60);
}

// ---- smoothing_suite ----

void smoothing_suite(Context& ctx) {
    const double A = ctx.num("A");
    const std::size_t grid = ctx.count("grid"), samples = ctx.count("samples");
    std::ostringstream os;
    CsvWriter w(os);
    w.header({"Delta", "A", "min_G", "max_G", "support_violation", "l1_fourier", "l1_cap", "C_lower", "C_upper",
              "holding", "samples"});
    bool range_ok = true, supp_ok = true, sand_ok = true, l1_ok = true;
    std::string range_d, supp_d, sand_d, l1_d;
    std::uint64_t tag = 0;
    for (double D : ctx.list("Deltas")) {
        const auto g = make_bump(D, A);
        double lo = INFINITY, hi = -INFINITY;
        const double a = g.lo() - 1, b = g.hi() + 1;
        for (std::size_t i = 0; i < grid; ++i) {
            const double v = g.value(a + (b - a) * static_cast<double>(i) / static_cast<double>(grid - 1));
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        const double viol = g.support_violation_mass();
        const double l1 = g.l1_fourier(), cap = 2 * std::pow(D, 2 * A);
        std::vector<double> xs(samples);
        for (std::size_t i = 0; i < samples; ++i) {
            auto r = seed_stream(sub_seed(ctx.seed(), tag), i);
            xs[i] = -0.5 + (1 + 1 / D) * r.uniform();
        }
        ++tag;
        const auto sw = bump_sandwich_check(g, xs);
        w.row(D, A, lo, hi, viol, l1, cap, sw.C_lower, sw.C_upper, static_cast<long long>(sw.holding),
              static_cast<long long>(sw.samples));
        const std::string tagD = "Delta " + fmt(D) + ": ";
        range_ok = range_ok && lo >= -1e-9 && hi <= 1 + 1e-9;
        range_d += tagD + "[" + fmt(lo) + ", " + fmt(hi) + "]; ";
        supp_ok = supp_ok && viol <= 1e-8;
        supp_d += tagD + fmt(viol) + "; ";
        sand_ok = sand_ok && sw.holding == sw.samples && std::isfinite(sw.C_lower) && std::isfinite(sw.C_upper);
        sand_d += tagD + std::to_string(sw.holding) + "/" + std::to_string(sw.samples) + " with C_lower " +
                  fmt(sw.C_lower) + ", C_upper " + fmt(sw.C_upper) + "; ";
        l1_ok = l1_ok && l1 <= cap;
        l1_d += tagD + fmt(l1) + " <= " + fmt(cap) + "; ";
        ctx.metric("C_lower_Delta" + fmt(D), sw.C_lower);
        ctx.metric("C_upper_Delta" + fmt(D), sw.C_upper);
        ctx.metric("l1_fourier_Delta" + fmt(D), l1);
    }
    ctx.criterion(5, "range", range_ok, range_d + "tolerance 1e-9");
    ctx.criterion(5, "support", supp_ok, supp_d + "limit 1e-8");
    ctx.criterion(5, "sandwich", sand_ok, sand_d);
    ctx.criterion(5, "fourier_l1", l1_ok, l1_d);
    ctx.table("bumps", os.str());
}

// ---- ballot_sweep ----

void ballot_sweep(Context& ctx) {
    const Clock clock;

    // DP against Monte Carlo on random concave barriers
    const std::size_t nmc = ctx.count("mc_configs");
    const std::uint64_t paths = ctx.count("mc_paths");
    std::ostringstream mc_os;
    CsvWriter mw(mc_os);
    mw.header({"config", "k", "y", "w", "dp", "mc", "hits", "sigma", "z"});
    double worst_z = 0;
    for (std::size_t c = 0; c < nmc; ++c) {
        auto rng = seed_stream(ctx.seed(), c);
        const int k = 5 + static_cast<int>(rng.uniform() * 30);
        const double y = 0.5 + 2 * rng.uniform();
        const auto bf = sample_barrier_function(rng, k, ctx.num("theta"), ctx.num("c1"), y);
        const double w = std::min(bf.f(k) - 1, -0.5 * std::sqrt(k * 0.5) + rng.uniform());
        const auto b = bf.barrier();
        const auto dp = bridge_survival_dp(k, w, b);
        const auto mc = bridge_survival_mc(sub_seed(ctx.seed(), 100 + c), k, w, b, paths, ctx.workers());
        // sigma under the hypothesis that the DP value is exact
        const double p = std::clamp(dp.conditional, 0.0, 1.0);
        const double sigma = std::sqrt(p * (1 - p) / static_cast<double>(mc.hits));
        const double diff = std::abs(dp.conditional - mc.conditional.value);
        const double z = sigma > 0 ? diff / sigma : (diff == 0 ? 0 : INFINITY);
        worst_z = std::max(worst_z, z);
        mw.row(static_cast<long long>(c), k, y, w, dp.conditional, mc.conditional.value,
               static_cast<long long>(mc.hits), sigma, z);
    }
    ctx.table("dp_vs_mc", mc_os.str());
    ctx.metric("dp_mc_max_z", worst_z);
    ctx.criterion(6, "dp_vs_mc", worst_z <= 3,
                  "max |DP - MC| / sigma " + fmt(worst_z) + " over " + std::to_string(nmc) + " configurations (limit 3)");

    // constant barrier bridge 0 -> 0
    const int kr = static_cast<int>(ctx.count("reflection_k"));
    const double yr = ctx.num("reflection_y");
    const double pinned = bridge_survival_pinned(kr, 0, Barrier::constant(kr, yr));
    const double bin = bridge_survival_dp(kr, 0, Barrier::constant(kr, yr)).conditional;
    const double continuum = 1 - std::exp(-4 * yr * yr / kr);
    ctx.metric("constant_barrier_pinned", pinned);
    ctx.metric("constant_barrier_bin", bin);
    ctx.metric("continuum_reflection", continuum);
    ctx.criterion(6, "constant_barrier", std::abs(pinned - 0.3023) <= 0.02,
                  "pinned 0->0 survival " + fmt(pinned) + " vs 0.3023 +- 0.02 (continuum formula " + fmt(continuum) +
                      ", endpoint bin (0,1] " + fmt(bin) + ")");

    // ratio DP / ballot bound over the sweep grid; n = k + 1 so the barrier
    // closes back to y at the endpoint
    std::vector<BallotRow> rows;
    const auto ks = ctx.list("ks");
    double C = 0, C_small = 0, C_top = 0, lo = INFINITY;
    const double k_top = *std::max_element(ks.begin(), ks.end());
    for (double kd : ks)
        for (double y : ctx.list("ys")) {
            const int k = static_cast<int>(kd);
            const auto prof = surrogate_profile(y, k + 1);
            const auto b = Barrier::from_profile(k, prof);
            const double m = centering_m(k, prof.n);
            std::vector<double> ws;
            for (double x = m + prof.lower(k) - 4; x < m + prof.upper(k); x += 1) ws.push_back(x);
            const auto res = bridge_survival_dp_bins(k, ws, b);
            for (std::size_t i = 0; i < ws.size(); ++i) {
                const double bound = ballot_bound(k, y, ws[i], prof);
                const double dpv = std::exp(res[i].log_joint);
                const double ratio = std::exp(res[i].log_joint - std::log(bound));
                rows.push_back({k, y, ws[i], dpv, NAN, bound, ratio});
                if (ratio > 0) lo = std::min(lo, ratio);
                C = std::max(C, ratio);
                if (kd == k_top)
                    C_top = std::max(C_top, ratio);
                else
                    C_small = std::max(C_small, ratio);
            }
        }
    std::ostringstream os;
    write_ballot_csv(os, rows);
    ctx.table("sweep", os.str());
    ctx.metric("ballot_constant", C);
    ctx.metric("ballot_constant_largest_k", C_top);
    ctx.metric("ballot_constant_smaller_k", C_small);
    // Bounded means: finite, and the largest k does not outgrow the smaller
    // ones by more than a factor 2.
    const bool bounded = std::isfinite(C) && lo > 0 && C_top <= 2 * C_small;
    ctx.criterion(6, "ballot_ratio", bounded,
                  "empirical constant " + fmt(C) + "; max at k = " + fmt(k_top) + " is " + fmt(C_top) +
                      " vs " + fmt(C_small) + " below (allowed growth x2)");
    runtime_criterion(ctx, 6, clock, 300);
}

// ---- moments_model ----

void moments_model(Context& ctx) {
    const Clock clock;
    std::vector<int> qs;
    for (double q : ctx.list("qs")) qs.push_back(static_cast<int>(q));
    const auto rows = moment_match(ctx.seed(), ctx.primes(), ctx.num("j"), ctx.num("k"), qs, ctx.count("M"),
                                   ctx.workers());
    std::ostringstream os;
    CsvWriter w(os);
    w.header({"q", "moment", "gaussian", "ratio"});
    bool ok = true;
    std::string d;
    for (const auto& r : rows) {
        w.row(r.q, r.moment, r.gaussian, r.ratio);
        ctx.metric("ratio_q" + std::to_string(r.q), r.ratio);
        ok = ok && r.ratio >= 0.8 && r.ratio <= 1.25;
        d += "q=" + std::to_string(r.q) + ": " + fmt(r.ratio) + "; ";
    }
    ctx.table("moments", os.str());
    ctx.criterion(7, "moment_ratios", ok, d + "range [0.8, 1.25]");
    runtime_criterion(ctx, 7, clock, 600);
}

// ---- berry_esseen ----

void berry_esseen(Context& ctx) {
    const auto rep =
        increment_gaussianity(ctx.seed(), ctx.primes(), ctx.num("j"), ctx.num("k"), ctx.count("M"), ctx.workers());
    ctx.metric("distance", rep.distance);
    ctx.metric("beta", rep.beta);
    ctx.metric("intervals", static_cast<double>(rep.intervals));
    ctx.metric("primes", static_cast<double>(rep.primes));
    ctx.criterion(8, "distance", rep.distance <= 0.01,
                  "sup-interval distance " + fmt(rep.distance) + " over " + std::to_string(rep.intervals) +
                      " intervals (limit 0.01)");
}

// ---- density_check ----

void density_suite(Context& ctx) {
    const double r = ctx.num("r"), Delta = ctx.num("Delta");
    const auto rows = density_check(ctx.seed(), ctx.primes(), r, Delta, ctx.count("M"), 0.0, ctx.workers());
    double lo = INFINITY, hi = 0;
    for (const auto& row : rows) {
        lo = std::min(lo, row.ratio);
        hi = std::max(hi, row.ratio);
    }
    std::ostringstream os;
    write_density_csv(os, rows, Delta);
    ctx.table("bins", os.str());
    ctx.metric("ratio_min", lo);
    ctx.metric("ratio_max", hi);
    ctx.metric("bins", static_cast<double>(rows.size()));
    ctx.criterion(9, "ratios", !rows.empty() && lo >= 0.2 && hi <= 5,
                  "bin ratios in [" + fmt(lo) + ", " + fmt(hi) + "] over " + std::to_string(rows.size()) +
                      " bins at r = " + fmt(r) + " (range [0.2, 5])");
}

// ---- moments_zeta ----

void moments_zeta(Context& ctx) {
    const Clock clock;
    const double z = std::abs(zeta_critical(ctx.num("zero")));
    ctx.metric("abs_zeta_at_zero", z);
    ctx.criterion(10, "first_zero", z <= 1e-4, "|zeta| " + fmt(z) + " (limit 1e-4)");

    const std::size_t n = ctx.count("rs_checks");
    const double lo = ctx.num("t_lo"), hi = ctx.num("t_hi");
    std::ostringstream os;
    CsvWriter w(os);
    w.header({"t", "rs_re", "rs_im", "em_re", "em_im", "rel_diff"});
    double worst = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = lo + (hi - lo) * seed_stream(sub_seed(ctx.seed(), 1), i).uniform();
        const cplx a = zeta_rs(t), b = zeta_em({0.5, t});
        const double rel = std::abs(a - b) / std::abs(b);
        worst = std::max(worst, rel);
        w.row(t, a.real(), a.imag(), b.real(), b.imag(), rel);
    }
    ctx.table("rs_vs_em", os.str());
    ctx.metric("rs_em_max_rel", worst);
    ctx.criterion(10, "rs_vs_em", worst <= 1e-6,
                  "max relative gap " + fmt(worst) + " over " + std::to_string(n) + " points (limit 1e-6)");

    const double T = ctx.num("T");
    const auto est = moment_estimate(ctx.seed(), T, 2, ctx.count("samples"), ctx.workers());
    const double L = std::log(T);
    ctx.metric("second_moment", est.value, est.lo, est.hi);
    ctx.metric("second_moment_over_logT", est.value / L, est.lo / L, est.hi / L);
    ctx.criterion(10, "second_moment", est.value / L >= 0.7 && est.value / L <= 1.4,
                  "mean |zeta|^2 / log T = " + fmt(est.value / L) + " (95% CI " + fmt(est.lo / L) + ", " +
                      fmt(est.hi / L) + "), range [0.7, 1.4]");
    runtime_criterion(ctx, 10, clock, 600);
}

// ---- tail_surrogate ----

void tail_surrogate(Context& ctx) {
    const Clock clock;
    const int n = static_cast<int>(ctx.count("n"));
    const auto spec = ctx.num("binary") != 0 ? hierarchy_binary(n) : hierarchy_e(n);
    const auto centered = sample_hierarchical(spec, ctx.seed(), ctx.count("runs"), ctx.workers());
    std::vector<double> ys;
    for (double y = ctx.num("y_lo"); y <= ctx.num("y_hi") + 1e-9; y += ctx.num("y_step")) ys.push_back(y);
    const auto fit = tail_shape(centered, ys);

    std::ostringstream mx;
    CsvWriter mw(mx);
    mw.header({"run", "centered_max"});
    for (std::size_t i = 0; i < centered.size(); ++i) mw.row(static_cast<long long>(i), centered[i]);
    ctx.table("maxima", mx.str());
    std::ostringstream tl;
    CsvWriter tw(tl);
    tw.header({"y", "prob", "prob_over_y_e2y"});
    for (std::size_t i = 0; i < fit.ys.size(); ++i)
        tw.row(fit.ys[i], fit.probs[i], fit.probs[i] / (fit.ys[i] * std::exp(-2 * fit.ys[i])));
    ctx.table("tail", tl.str());

    ctx.metric("median", fit.median);
    ctx.metric("slope", fit.fit.slope);
    ctx.metric("slope_ols", fit.ols.slope);
    ctx.metric("fit_points", static_cast<double>(fit.fit.points));
    ctx.metric("leaves", static_cast<double>(spec.leaves()));
    ctx.criterion(11, "median", std::abs(fit.median) <= 1.5, "median centered max " + fmt(fit.median) + " (limit +-1.5)");
    ctx.criterion(11, "slope", fit.fit.slope >= -2.4 && fit.fit.slope <= -1.7,
                  "weighted slope " + fmt(fit.fit.slope) + " (unweighted " + fmt(fit.ols.slope) + ") over " +
                      std::to_string(fit.fit.points) + " points, range [-2.4, -1.7]");
    runtime_criterion(ctx, 11, clock, 900);
}

// ---- tail_zeta: grid maxima of zeta, no acceptance criterion ----

void tail_zeta(Context& ctx) {
    const double T = ctx.num("T");
    const auto rows = zeta_tail_samples(ctx.seed(), T, ctx.count("samples"), ctx.workers());
    std::ostringstream os;
    write_tail_csv(os, rows);
    ctx.table("maxima", os.str());
    std::vector<double> ys;
    for (const auto& r : rows) ys.push_back(r.y);
    ctx.metric("median_y", median(ys));
    ctx.metric("max_y", *std::max_element(ys.begin(), ys.end()));
    std::size_t high = 0;
    for (double y : ys) high += y > 0;
    ctx.metric("fraction_y_positive", static_cast<double>(high) / static_cast<double>(ys.size()));

    const auto sub = subharmonic_check(sub_seed(ctx.seed(), 1), ctx.num("disc_T"), ctx.count("disc_samples"), 1.05,
                                       ctx.workers());
    std::size_t ok = 0;
    for (const auto& r : sub) ok += r.ok;
    ctx.metric("subharmonic_holding", static_cast<double>(ok) / static_cast<double>(sub.size()));
    const auto grid = discretization_check(sub_seed(ctx.seed(), 2), T, ctx.count("grid_samples"), 8, ctx.workers());
    ctx.metric("discretization_C", grid.C);
    ctx.metric("discretization_max", grid.max_ratio);
}

}  // namespace

const std::vector<SuiteInfo>& registry() {
    static const std::vector<SuiteInfo> r{
        {"tail_zeta", "grid maxima of |zeta| on [T, 2T], subharmonic and grid-discretization checks", {}, 0,
         json{{"T", 1e7}, {"samples", 500}, {"disc_T", 1e4}, {"disc_samples", 8}, {"grid_samples", 30}}, tail_zeta},
        {"tail_surrogate", "tail of the centered maximum of the hierarchical Gaussian field", {11}, 0,
         json{{"n", 14}, {"runs", 2000}, {"binary", 0}, {"y_lo", 1}, {"y_hi", 5}, {"y_step", 0.5}}, tail_surrogate},
        {"mertens", "sum of 1/p against the loglog difference", {1}, 100'000'000,
         json{{"a", 1e3}, {"b", 1e8}}, mertens_suite},
        {"moments_model", "even moments of the random Euler model against Gaussian moments", {7}, 100'000'000,
         json{{"j", 2}, {"k", 2.9}, {"qs", {1, 2, 3}}, {"M", 1e6}}, moments_model},
        {"moments_zeta", "zeta evaluation checks and the second moment on [T, 2T]", {10}, 0,
         json{{"zero", 14.1347251417}, {"rs_checks", 200}, {"t_lo", 50}, {"t_hi", 1e4}, {"T", 1e7}, {"samples", 2000}},
         moments_zeta},
        {"ballot_sweep", "bridge survival DP: Monte Carlo, constant barrier and ballot-bound sweep", {6}, 0,
         json{{"mc_configs", 20},
              {"mc_paths", 200000},
              {"theta", 0.3},
              {"c1", 2.0},
              {"reflection_k", 100},
              {"reflection_y", 3},
              {"ks", {25, 100, 400}},
              {"ys", {1, 3, 6}}},
         ballot_sweep},
        {"smoothing_suite", "band-limited bump: range, support, sandwich constants, Fourier mass", {5}, 0,
         json{{"Deltas", {3, 5, 8}}, {"A", 3}, {"grid", 10000}, {"samples", 5000}}, smoothing_suite},
        {"poisson_suite", "Poisson-summation reconstruction of random Dirichlet polynomials", {4}, 0,
         json{{"polys", 100}, {"max_length", 4096}, {"t_max", 1e5}, {"eps", 1.0}}, poisson_suite},
        {"fourth_moment_suite", "local factors of the twisted fourth moment", {3}, 0,
         json{{"shift_reps", 6}, {"radii", {1e-4, 1e-3, 1e-2, 5e-2}}}, fourth_moment_suite},
        {"mollifier_suite", "Euler-product identity on random ranges and the mollifier approximation", {2},
         100'000'000,
         json{{"configs", 100},
              {"tau_lo", 1e3},
              {"tau_hi", 1e7},
              {"k_max", 2.9},
              {"moll_p_lo", 30},
              {"moll_p_hi", 90},
              {"moll_taus", 50},
              {"moll_omega_cap", 3},
              {"moll_additive", 0.05}},
         mollifier_suite},
        {"berry_esseen", "sup-interval distance of a model increment from its Gaussian", {8}, 100'000'000,
         json{{"j", 1.9}, {"k", 2.9}, {"M", 1e6}}, berry_esseen},
        {"density_check", "bin probabilities of S_r against the Gaussian density", {9}, 100'000'000,
         json{{"r", 2.9}, {"Delta", 4}, {"M", 1e6}}, density_suite},
    };
    return r;
}

}  // namespace zlab::lab
