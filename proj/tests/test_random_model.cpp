#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fixtures.hpp"
#include "zlab/errors.hpp"
#include "zlab/random_model.hpp"
#include "zlab/simd.hpp"

using namespace zlab;

namespace {

constexpr double two_pi = 2 * std::numbers::pi;

double gk(std::function<double(double)> f, double a, double b) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 15, 1e-14);
}

double sample_var(const std::vector<double>& x) {
    double m = 0;
    for (double v : x) m += v;
    m /= static_cast<double>(x.size());
    double s = 0;
    for (double v : x) s += (v - m) * (v - m);
    return s / static_cast<double>(x.size() - 1);
}

}  // namespace

TEST_CASE("X_p draws") {
    CHECK(X_p(0, 5, 0) == doctest::Approx(0.547214).epsilon(1e-6));
    CHECK(X_p(0, 5, 0) == doctest::Approx(1 / std::sqrt(5.0) + 0.1).epsilon(1e-15));

    // variance by quadrature over theta
    for (std::uint64_t p : {2ull, 3ull, 101ull}) {
        const double mean = gk([&](double th) { return X_p(th, p, 0.7); }, 0, two_pi) / two_pi;
        const double var = gk([&](double th) { return std::pow(X_p(th, p, 0.7), 2); }, 0, two_pi) / two_pi;
        CHECK(std::abs(mean) < 1e-14);
        CHECK(var == doctest::Approx(X_p_variance(p)).epsilon(1e-13));
    }

    auto rng = seed_stream(11, 0);
    const std::size_t M = 1'000'000;
    const std::uint64_t p = 3;
    std::vector<double> xs(M);
    for (auto& x : xs) x = sample_X_p(rng, p, 0.0);
    const auto est = mean_ci(xs);
    CHECK(std::abs(est.value) <= 3 * est.stderr_);
    // standard error of the sample variance from the fourth moment
    const double m4 = gk([&](double th) { return std::pow(X_p(th, p, 0), 4); }, 0, two_pi) / two_pi;
    const double v = X_p_variance(p);
    const double se_var = std::sqrt((m4 - v * v) / M);
    CHECK(std::abs(sample_var(xs) - v) <= 3 * se_var);
}

TEST_CASE("Euler path: degenerate angles match the deterministic walk") {
    const auto& t = zt::table();
    EulerModelConfig cfg;
    cfg.k_start = 0;
    cfg.scales = {1.0, 1.5, 2.0, 2.5};
    cfg.grid = {-0.5, 0.25, 5};
    const auto r = primes_in_log_range(t, 0, 2.5);
    const auto path = euler_path_from_angles(t, cfg, std::vector<double>(r.size(), 0.0));
    for (std::size_t i = 0; i < cfg.scales.size(); ++i)
        for (std::size_t j = 0; j < cfg.grid.count; ++j) {
            const double want = partial_sum(t, 0, cfg.scales[i], 0.0, cfg.grid.at(j)).real();
            CHECK(std::abs(path.S(i, j) - want) < 1e-12);
        }
    // empty range
    EulerModelConfig e;
    e.k_start = 2;
    e.scales = {2.0};
    e.grid = {0, 0.1, 3};
    auto rng = seed_stream(1, 1);
    const auto z = sample_euler_path(rng, t, e);
    for (double v : z.values) CHECK(v == 0.0);

    // random angles against X_p directly
    auto rng2 = seed_stream(2, 2);
    EulerModelConfig c2;
    c2.k_start = 1;
    c2.scales = {2.0};
    c2.grid = {0.3, 1.0, 2};
    const auto q = sample_euler_path(rng2, t, c2);
    for (std::size_t j = 0; j < 2; ++j) {
        double s = 0;
        for (std::size_t i = 0; i < q.theta.size(); ++i) s += X_p(q.theta[i], t.primes[q.range.begin + i], c2.grid.at(j));
        CHECK(std::abs(q.S(0, j) - s) < 1e-11);
    }
    CHECK_THROWS_AS(sample_euler_path(rng, t, EulerModelConfig{0, {30.0}, {}, 1}), CapacityError);
}

TEST_CASE("Euler path: correlation across shifts decays") {
    const auto& t = zt::table();
    EulerModelConfig cfg;
    cfg.k_start = 0;
    cfg.scales = {2.5};
    cfg.grid = {0, 1, 2};
    auto corr = [&](double dh) {
        cfg.grid.dh = dh;
        std::vector<double> a, b;
        for (std::uint64_t r = 0; r < 400; ++r) {
            auto rng = seed_stream(21, r);
            const auto p = sample_euler_path(rng, t, cfg);
            a.push_back(p.S(0, 0));
            b.push_back(p.S(0, 1));
        }
        double ma = 0, mb = 0;
        for (std::size_t i = 0; i < a.size(); ++i) ma += a[i], mb += b[i];
        ma /= a.size();
        mb /= b.size();
        double sab = 0, saa = 0, sbb = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            sab += (a[i] - ma) * (b[i] - mb);
            saa += (a[i] - ma) * (a[i] - ma);
            sbb += (b[i] - mb) * (b[i] - mb);
        }
        return sab / std::sqrt(saa * sbb);
    };
    const double near = corr(0.001), far = corr(30.0);
    MESSAGE("correlation at dh = 0.001: " << near << ", at dh = 30: " << far);
    CHECK(near > 0.95);
    CHECK(std::abs(far) < 0.3);
}

TEST_CASE("Gaussian walk") {
    auto rng = seed_stream(3, 0);
    const auto w = sample_gaussian_walk(rng, 200);
    for (std::size_t j : {0ul, 10ul, 57ul})
        for (std::size_t k : {60ul, 120ul, 199ul}) {
            double s = 0;
            for (std::size_t l = j + 1; l <= k; ++l) s += w.increments[l];
            CHECK(std::abs((w.sums[k] - w.sums[j]) - s) < 1e-12);
        }
    auto r2 = seed_stream(4, 0);
    std::vector<double> xs(200000);
    for (std::size_t i = 0; i < xs.size(); i += 200) {
        const auto ww = sample_gaussian_walk(r2, 200);
        std::copy(ww.increments.begin(), ww.increments.end(), xs.begin() + i);
    }
    CHECK(std::abs(sample_var(xs) - 0.5) < 3 * 0.5 * std::sqrt(2.0 / xs.size()));
}

TEST_CASE("model sampler") {
    const auto& t = zt::table();
    // all exact: each path is a sum of X_p over its own stream
    const ModelSampler exact(t, 1.0, {1.5, 2.0}, 0.3, 0);
    CHECK(exact.exact_primes() == exact.total_primes());
    const auto xs = exact.sample(99, 40);
    const auto r = primes_in_log_range(t, 1.0, 2.0);
    const std::size_t cut = primes_in_log_range(t, 1.0, 1.5).size();
    for (std::size_t q = 0; q < 40; ++q) {
        auto g = seed_stream(99, q);
        double s = 0, s_cut = 0;
        for (std::size_t i = 0; i < r.size(); ++i) {
            const double th = two_pi * simd::uniform52(g());
            s += X_p(th, t.primes[r.begin + i], 0.3);
            if (i + 1 == cut) s_cut = s;
        }
        CHECK(std::abs(xs[2 * q] - s_cut) < 1e-11);
        CHECK(std::abs(xs[2 * q + 1] - s) < 1e-11);
    }
    // worker count does not matter
    const ModelSampler hyb(t, 1.0, {2.0, 2.5}, 0.0, 2000);
    CHECK(hyb.exact_primes() < hyb.total_primes());
    CHECK(hyb.sample(5, 3000, 1) == hyb.sample(5, 3000, 3));
    // hybrid and exact samplers agree in variance
    double vtot = 0;
    for (std::size_t i = 0; i < primes_in_log_range(t, 1.0, 2.5).size(); ++i)
        vtot += X_p_variance(t.primes[primes_in_log_range(t, 1.0, 2.5).begin + i]);
    CHECK(hyb.variance(1) == doctest::Approx(vtot).epsilon(1e-12));
    const auto hs = hyb.sample(6, 100000, 1);
    std::vector<double> last;
    for (std::size_t q = 0; q < 100000; ++q) last.push_back(hs[2 * q + 1]);
    CHECK(std::abs(sample_var(last) - vtot) < 3 * vtot * std::sqrt(2.0 / last.size()));
}

TEST_CASE("Laplace transform") {
    const auto& t = zt::table();
    // per-prime expansion against an independent quadrature
    const std::uint64_t p = 10007;
    const double z = 0.1;
    const double quad = gk([&](double th) { return std::exp(z * X_p(th, p, 0)); }, 0, two_pi) / two_pi;
    CHECK(laplace_per_prime(p, z) == doctest::Approx(quad).epsilon(1e-14));
    const double gap = std::abs(quad - (1 + z * z / (4.0 * p)));
    MESSAGE("per-prime gap " << gap);
    CHECK(gap <= 1e-9);

    CHECK(laplace_check(1, t, 1, 2, 0.0, 1000, 0).estimate.value == 1.0);

    const auto rep = laplace_check(7, t, 1, 2, 1.0, 1'000'000, 1.0);
    const auto r = primes_in_log_range(t, 1, 2);
    double prod = 1;
    for (std::size_t i = 0; i < r.size(); ++i) prod *= laplace_per_prime(t.primes[r.begin + i], 1.0);
    MESSAGE("E e^{S_2 - S_1}: " << rep.estimate.value << " +- " << rep.estimate.stderr_ << ", product " << prod);
    CHECK(std::abs(rep.estimate.value - prod) <= 4 * rep.estimate.stderr_);
    CHECK(rep.estimate.value == doctest::Approx(std::exp(0.25)).epsilon(0.02));
    CHECK(rep.pass);
    CHECK_THROWS_AS(laplace_check(1, t, 1, 2, 11.0, 1000, 0), DomainError);
}

TEST_CASE("moment match, small M") {
    const auto& t = zt::table();
    const auto rows = moment_match(3, t, 2.0, 2.9, {1, 2, 3}, 200000);
    for (const auto& r : rows) {
        MESSAGE("q " << r.q << ": ratio " << r.ratio);
        CHECK(r.ratio >= 0.8);
        CHECK(r.ratio <= 1.25);
    }
}

TEST_CASE("Gaussian distance") {
    auto g = seed_stream(8, 0);
    std::vector<double> xs(200000);
    for (auto& x : xs) x = std::sqrt(0.3) * g.normal();
    const auto r = gaussian_distance(xs, 0.3);
    CHECK(r.intervals == 1035);
    CHECK(r.distance < 0.01);
    // a single summand is far from Gaussian
    for (auto& x : xs) x = X_p(two_pi * g.uniform(), 17, 0);
    CHECK(gaussian_distance(xs, X_p_variance(17)).distance > 0.05);

    const auto& t = zt::table();
    double prev = 1;
    for (double k : {1.2, 1.6, 2.2}) {
        const auto rep = increment_gaussianity(9, t, 1.0, k, 100000);
        MESSAGE("j = 1, k = " << k << ": distance " << rep.distance << " over " << rep.primes << " primes");
        CHECK(rep.distance < prev);
        prev = rep.distance;
    }
    CHECK_THROWS_AS(increment_gaussianity(9, t, 1.0, 2.0, 100), DomainError);
}

TEST_CASE("density table") {
    const auto& t = zt::table();
    const double r = 2.0;
    const ModelSampler smp(t, 0.0, {r});
    const auto xs = smp.sample(12, 400000);
    const auto d4 = density_table(xs, r, 4);
    const auto d8 = density_table(xs, r, 8);
    CHECK(d4.front().v == doctest::Approx(-std::floor(2 * std::sqrt(r) * 4) / 4));
    // symmetry about 0
    const auto& up = d4[d4.size() / 2];
    const auto& dn = d4[d4.size() / 2 - 1];
    CHECK(up.v == 0.0);
    CHECK(std::abs(up.prob.value - dn.prob.value) <= 3 * std::hypot(up.prob.stderr_, dn.prob.stderr_));
    // halving the bin halves the probability
    const auto& h8 = d8[d8.size() / 2];
    CHECK(h8.v == 0.0);
    CHECK(std::abs(2 * h8.prob.value - up.prob.value) <= 3 * std::hypot(2 * h8.prob.stderr_, up.prob.stderr_) + 0.02 * up.prob.value);
    for (const auto& row : d4) {
        CHECK(row.ratio > 0.2);
        CHECK(row.ratio < 5);
    }
    std::ostringstream os;
    write_density_csv(os, d4, 4);
    CHECK(os.str().rfind("bin_lo,bin_hi,prob", 0) == 0);
}

TEST_CASE("hierarchical field") {
    const auto e14 = hierarchy_e(14);
    const double ratio = static_cast<double>(e14.leaves()) / std::exp(14.0);
    MESSAGE("n = 14 leaves " << e14.leaves());
    CHECK(ratio > 0.6);
    CHECK(ratio < 1.6);
    CHECK(brw_centering(16) == doctest::Approx(13.92056).epsilon(1e-6));
    CHECK_THROWS_AS(sample_hierarchical(hierarchy_e(17), 1, 1), CapacityError);
    CHECK_THROWS_AS(sample_hierarchical(hierarchy_e(60), 1, 1), CapacityError);
    // the max-only path agrees with the stored leaves
    const auto h6 = hierarchy_e(6);
    const auto leaves = sample_field(h6, 3, 2);
    CHECK(sample_hierarchical(h6, 3, 3)[2] == *std::max_element(leaves.begin(), leaves.end()) - brw_centering(6));
    CHECK(hierarchy_binary(14).branching.size() == 20);

    // n = 1: the max of b iid N(0, 1/2); E max of 3 standard normals = 0.8462843753
    const auto h1 = hierarchy_e(1);
    CHECK(h1.branching == std::vector<int>{3});
    const auto c1 = sample_hierarchical(h1, 4, 40000, 2);
    const auto est = mean_ci(c1);
    CHECK(std::abs(est.value + 1 - 0.8462843753 * std::sqrt(0.5)) <= 3 * est.stderr_);

    // covariance = shared depth / 2
    const auto h4 = hierarchy_e(4);
    const std::size_t L = h4.leaves(), R = 20000;
    std::vector<double> v0(R), vj(R);
    for (std::size_t j : {0ul, 1ul, L / 2, L - 1}) {
        for (std::size_t r = 0; r < R; ++r) {
            const auto f = sample_field(h4, 17, r);
            v0[r] = f[0];
            vj[r] = f[j];
        }
        const int d = tree_distance(h4, 0, j);
        double m0 = 0, mj = 0;
        for (std::size_t r = 0; r < R; ++r) m0 += v0[r], mj += vj[r];
        m0 /= R;
        mj /= R;
        double c = 0;
        for (std::size_t r = 0; r < R; ++r) c += (v0[r] - m0) * (vj[r] - mj);
        c /= (R - 1);
        const double want = 0.5 * (4 - d);
        const double se = std::sqrt((2.0 * 2.0 + want * want) / R);
        CAPTURE(j);
        CHECK(std::abs(c - want) <= 3 * se);
    }
    CHECK(tree_distance(h4, 5, 5) == 0);
    CHECK(tree_distance(h4, 0, 1) == 1);

    CHECK(sample_hierarchical(hierarchy_e(6), 3, 50, 1) == sample_hierarchical(hierarchy_e(6), 3, 50, 3));
}

TEST_CASE("tail shape fit") {
    auto g = seed_stream(13, 0);
    std::vector<double> xs(200000);
    for (auto& x : xs) x = -std::log(1 - g.uniform()) / 2;
    const auto f = tail_shape(xs, {1, 1.5, 2, 2.5, 3, 3.5, 4});
    CHECK(f.fit.slope == doctest::Approx(-2).epsilon(0.05));
    CHECK(f.ols.slope == doctest::Approx(-2).epsilon(0.1));
    CHECK(f.median == doctest::Approx(std::log(2.0) / 2).epsilon(0.02));
}
