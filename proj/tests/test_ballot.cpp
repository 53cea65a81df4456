#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "zlab/barrier_ballot.hpp"
#include "zlab/errors.hpp"
#include "zlab/rng.hpp"

using namespace zlab;

namespace {

const double sig = std::sqrt(0.5);
double Phi(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

FlagInputs flat_inputs(const std::vector<double>& scales, std::size_t ns, double S = 0.0) {
    FlagInputs in;
    in.scales = scales;
    in.nshifts = ns;
    in.S_tilde.assign(scales.size() * ns, cplx(S, 0));
    in.zeta_e.assign(scales.size() * ns, 1.0);
    in.zeta_m.assign(scales.size() * ns, 1.0);
    return in;
}

}  // namespace

TEST_CASE("centering and barriers") {
    CHECK(centering_m(16, 16) == doctest::Approx(13.92056).epsilon(1e-6));
    CHECK(centering_m(0, 16) == 0.0);
    CHECK(centering_m(10, 16) == doctest::Approx(2 * centering_m(5, 16)).epsilon(1e-15));
    CHECK_THROWS_AS(centering_m(1, 1), DomainError);

    const auto p = asymptotic_profile(8, 16);
    CHECK(p.r() == 2);
    CHECK(std::isinf(p.upper(1)));
    CHECK(p.upper(1) > 0);
    CHECK(std::isinf(p.lower(1)));
    CHECK(p.lower(1) < 0);
    CHECK(p.lower(2) == doctest::Approx(-32));
    CHECK(p.upper(10) == doctest::Approx(8 + 1000 * std::log(6.0)).epsilon(1e-14));
    CHECK(p.upper(10) == doctest::Approx(1799.78).epsilon(2e-5));
    CHECK(p.upper(4) == doctest::Approx(8 + 1000 * std::log(4.0)));

    // U - L does not depend on y once k >= r
    const auto q = asymptotic_profile(12, 16);
    for (double k : {3.0, 5.0, 8.0, 11.5, 15.0})
        CHECK(p.upper(k) - p.lower(k) == doctest::Approx(q.upper(k) - q.lower(k)).epsilon(1e-14));
    for (double k : {1.0, 2.0, 3.0, 9.0}) CHECK(p.lower(k) <= p.upper(k));
    CHECK_THROWS_AS(p.upper(16), DomainError);

    const auto c = c_sequence({2.0, 3.0, 4.0});
    CHECK(c[0] == doctest::Approx(1 + std::exp(-2.0)));
    CHECK(c[2] == doctest::Approx((1 + std::exp(-2.0)) * (1 + std::exp(-3.0)) * (1 + std::exp(-4.0))));
    CHECK(high_point_threshold(1, 3) == doctest::Approx(23.9517).epsilon(1e-5));
}

TEST_CASE("event flags") {
    const std::vector<double> levels{1, 3, 5, 7};
    const std::vector<double> scales{1, 2, 3, 4, 5, 6, 7};
    auto prof = surrogate_profile(2, 8);
    FlagParams prm{3, 1};

    SUBCASE("zero path stays in B") {
        const auto in = flat_inputs(scales, 4);
        const auto f = event_flags(in, prof, levels, prm);
        CHECK(f.levels == 3);
        for (std::size_t l = 0; l < 3; ++l)
            for (std::size_t h = 0; h < 4; ++h) CHECK(f.at(f.B, l, h));
    }
    SUBCASE("a breach removes the shift from that level on") {
        auto in = flat_inputs(scales, 3);
        // scale 4 is in level l = 1 (3, 5]
        in.S_tilde[3 * 3 + 1] = cplx(centering_m(4, 8) + prof.upper(4) + 0.01, 0);
        const auto f = event_flags(in, prof, levels, prm);
        CHECK(f.at(f.B, 0, 1));
        CHECK_FALSE(f.at(f.B, 1, 1));
        CHECK_FALSE(f.at(f.B, 2, 1));
        CHECK(f.at(f.B, 2, 0));
    }
    SUBCASE("random tables: G is the conjunction and flags are nested") {
        auto rng = seed_stream(5, 0);
        for (int rep = 0; rep < 50; ++rep) {
            auto in = flat_inputs(scales, 16);
            for (auto& s : in.S_tilde) s = cplx(8 * rng.uniform() - 2, 8 * rng.uniform() - 4);
            for (auto& z : in.zeta_e) z = 2 * rng.uniform();
            for (auto& z : in.zeta_m) z = 2 * rng.uniform();
            const auto f = event_flags(in, prof, levels, prm);
            for (std::size_t l = 0; l < f.levels; ++l)
                for (std::size_t h = 0; h < 16; ++h) {
                    const bool g = f.at(f.A, l, h) && f.at(f.B, l, h) && f.at(f.C, l, h) && f.at(f.D, l, h);
                    CHECK(f.at(f.G, l, h) == g);
                    if (l > 0)
                        for (auto* v : {&f.A, &f.B, &f.C, &f.D, &f.G})
                            CHECK(f.at(*v, l, h) <= f.at(*v, l - 1, h));
                }
        }
    }
    SUBCASE("H flags use the threshold") {
        auto in = flat_inputs(scales, 2);
        const double V = high_point_threshold(prof.y, prof.n);
        in.zeta_abs = {0.5 * V, 2 * V};
        const auto f = event_flags(in, prof, levels, prm);
        CHECK_FALSE(f.H[0]);
        CHECK(f.H[1]);
    }
    SUBCASE("missing inputs") {
        auto in = flat_inputs({2, 3, 4}, 2);
        CHECK_THROWS_AS(event_flags(in, prof, levels, prm), StructuralError);
        auto in2 = flat_inputs(scales, 2);
        in2.zeta_e[5 * 2 + 1] = NAN;
        try {
            event_flags(in2, prof, levels, prm);
            FAIL("no error");
        } catch (const StructuralError& e) {
            CHECK(std::string(e.what()).find("l=2, k=6") != std::string::npos);
        }
        in2.zeta_e.clear();
        CHECK_THROWS_AS(event_flags(in2, prof, levels, prm), StructuralError);
    }
}

TEST_CASE("barrier function envelopes") {
    auto rng = seed_stream(9, 1);
    for (int rep = 0; rep < 40; ++rep) {
        const int k = 5 + static_cast<int>(rng.uniform() * 200);
        const double theta = 0.45 * rng.uniform();
        const auto bf = sample_barrier_function(rng, k, theta, 2.0, 1 + 3 * rng.uniform());
        CHECK(bf.g.front() == 0.0);
        CHECK(bf.g.back() == 0.0);
        CHECK(bf.envelopes_hold(theta, 2.0));
        const auto b = bf.barrier();
        CHECK(b.upper.back() == doctest::Approx(bf.alpha * k + bf.y));
    }
    BarrierFunction bad;
    bad.k = 4;
    bad.g = {0, 1, 3, 1, 0};  // convex bump in the middle
    CHECK_FALSE(bad.envelopes_hold(0.25, 2.0));
}

TEST_CASE("DP: trivial and closed-form cases") {
    // no barrier: conditional probability one, including a strongly tilted bin
    CHECK(bridge_survival_dp(30, 0.3, Barrier::none(30)).conditional == doctest::Approx(1).epsilon(1e-6));
    const auto far = bridge_survival_dp(400, 395, Barrier::none(400));
    CHECK(far.conditional == doctest::Approx(1).epsilon(1e-6));
    CHECK(std::abs(far.log_joint - far.log_endpoint) < 1e-6);
    // endpoint bin above the barrier
    CHECK(bridge_survival_dp(20, 3.5, Barrier::constant(20, 3)).conditional == 0.0);
    CHECK(bridge_survival_pinned(20, 3.5, Barrier::constant(20, 3)) == 0.0);

    // k = 1: ratio of Gaussian bin probabilities
    for (double y : {-0.3, 0.2, 0.7}) {
        const double w = -0.1;
        const double want = std::max(0.0, Phi(std::min(y, w + 1) / sig) - Phi(w / sig)) / (Phi((w + 1) / sig) - Phi(w / sig));
        CHECK(bridge_survival_dp(1, w, Barrier::constant(1, y)).conditional == doctest::Approx(want).epsilon(1e-6));
    }
    // k = 2: one-dimensional quadrature over W_1
    {
        const double y = 0.4, w = -0.6;
        auto f = [&](double x) {
            const double phi = std::exp(-x * x) / std::sqrt(std::numbers::pi);
            const double a = std::max(w, -1e9), b = std::min(w + 1, y);
            return b > a ? phi * (Phi((b - x) / sig) - Phi((a - x) / sig)) : 0.0;
        };
        const double joint = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, -12.0, y, 15, 1e-13);
        const auto r = bridge_survival_dp(2, w, Barrier::constant(2, y));
        CHECK(r.joint() == doctest::Approx(joint).epsilon(1e-5));
    }
    CHECK_THROWS_AS(bridge_survival_dp(10, 0, Barrier::none(10), 150), ToleranceError);
    CHECK_THROWS_AS(bridge_survival_dp(10, 0, Barrier::none(9)), StructuralError);
}

TEST_CASE("DP: constant barrier bridge against reflection") {
    const int k = 100;
    const double y = 3;
    const double continuum = 1 - std::exp(-4 * y * y / k);
    CHECK(continuum == doctest::Approx(0.30232).epsilon(1e-4));
    // Discrete monitoring: the continuum formula with the barrier raised by
    // 0.5826 sd (Siegmund's correction) is the matching oracle.
    const double yc = y + 0.5826 * sig;
    const double siegmund = 1 - std::exp(-4 * yc * yc / k);
    const double pinned = bridge_survival_pinned(k, 0, Barrier::constant(k, y));
    MESSAGE("pinned 0->0 survival " << pinned << ", corrected continuum " << siegmund << ", raw " << continuum);
    CHECK(std::abs(pinned - siegmund) < 5e-3);
    const auto bin = bridge_survival_dp(k, 0, Barrier::constant(k, y));
    MESSAGE("endpoint bin (0, 1] survival " << bin.conditional);
    // the bin average sits between the pinned values at its two ends
    const double top = bridge_survival_pinned(k, 1, Barrier::constant(k, y));
    CHECK(bin.conditional < pinned);
    CHECK(bin.conditional > top);
}

TEST_CASE("DP: many bins at once match single-bin runs") {
    const int k = 100;
    const auto prof = surrogate_profile(3, 2 * k);
    const auto b = Barrier::from_profile(k, prof);
    std::vector<double> ws;
    for (double w = -80; w <= 60; w += 7) ws.push_back(w);
    const auto all = bridge_survival_dp_bins(k, ws, b);
    for (std::size_t i = 0; i < ws.size(); ++i) {
        CAPTURE(ws[i]);
        const auto one = bridge_survival_dp(k, ws[i], b);
        // different tilts: agreement at the declared 1e-4 accuracy
        CHECK(std::abs(all[i].log_joint - one.log_joint) < 1e-4);
        // never more likely than the unconditioned endpoint
        CHECK(all[i].log_joint <= all[i].log_endpoint + 1e-9);
    }
}

TEST_CASE("DP: monotonicity") {
    const int k = 40;
    double prev = 2;
    for (double y : {4.0, 3.0, 2.0, 1.0, 0.5}) {
        const double p = bridge_survival_dp(k, -1, Barrier::constant(k, y)).conditional;
        CHECK(p <= prev + 1e-12);
        prev = p;
    }
    prev = 2;
    for (double w : {-4.0, -3.0, -2.0, -1.0, 0.0, 1.0}) {
        const double p = bridge_survival_dp(k, w, Barrier::constant(k, 2.5)).conditional;
        CHECK(p <= prev + 1e-12);
        prev = p;
    }
}

TEST_CASE("DP against Monte Carlo") {
    auto rng = seed_stream(77, 0);
    for (int c = 0; c < 4; ++c) {
        const int k = 5 + static_cast<int>(rng.uniform() * 30);
        const auto bf = sample_barrier_function(rng, k, 0.3, 2.0, 0.5 + 2 * rng.uniform());
        const double w = std::min(bf.f(k) - 1, -0.5 * std::sqrt(k * 0.5) + rng.uniform());
        const auto b = bf.barrier();
        const auto dp = bridge_survival_dp(k, w, b);
        const auto mc = bridge_survival_mc(1000 + c, k, w, b, 100000);
        CAPTURE(k);
        CAPTURE(w);
        CHECK(std::abs(dp.conditional - mc.conditional.value) <= 3 * mc.conditional.stderr_ + 1e-4);
    }
    const auto none = bridge_survival_mc(3, 10, 0, Barrier::none(10), 20000);
    CHECK(none.conditional.value == 1.0);
    CHECK_THROWS_AS(bridge_survival_mc(3, 10, 0, Barrier::none(10), 5000), DomainError);
    CHECK_THROWS_AS(bridge_survival_mc(3, 10, 30, Barrier::none(10), 20000), InsufficientSample);
    // worker count does not change the estimate
    const auto a = bridge_survival_mc(4, 12, -1, Barrier::constant(12, 1), 30000, 1);
    const auto bb = bridge_survival_mc(4, 12, -1, Barrier::constant(12, 1), 30000, 3);
    CHECK(a.hits == bb.hits);
    CHECK(a.survivors == bb.survivors);
}

TEST_CASE("ballot bounds") {
    CHECK(constant_barrier_bound(100, 3, 0) == doctest::Approx(0.16));
    const auto p = surrogate_profile(3, 101);
    const double w = centering_m(100, 101) + p.upper(100);
    CHECK(ballot_bound(100, 3, w, p) == doctest::Approx(4 * std::pow(100.0, -1.5) * std::exp(-w * w / 100)));

    // ratio DP / bound over a small grid stays within one order of magnitude band
    double lo = INFINITY, hi = 0;
    for (int k : {25, 100})
        for (double y : {1.0, 3.0}) {
            const auto prof = surrogate_profile(y, k + 1);
            const auto b = Barrier::from_profile(k, prof);
            const double top = centering_m(k, prof.n) + prof.upper(k);
            std::vector<double> ws;
            for (double w = centering_m(k, prof.n) + prof.lower(k) - 4; w < top; w += 1) ws.push_back(w);
            const auto res = bridge_survival_dp_bins(k, ws, b);
            for (std::size_t i = 0; i < ws.size(); ++i) {
                const double ratio = std::exp(res[i].log_joint - std::log(ballot_bound(k, y, ws[i], prof)));
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
            }
        }
    MESSAGE("DP / ballot bound in [" << lo << ", " << hi << "]");
    CHECK(hi < 100);
    CHECK(lo > 0);

    std::ostringstream os;
    write_ballot_csv(os, {{25, 1, 0.5, 0.1, NAN, 0.2, 0.5}});
    CHECK(os.str().rfind("k,y,w,dp,mc,bound,ratio\n", 0) == 0);
}
