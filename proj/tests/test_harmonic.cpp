#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "zlab/errors.hpp"
#include "zlab/harmonic_kit.hpp"
#include "zlab/rng.hpp"

using namespace zlab;

namespace {

constexpr double pi = std::numbers::pi;

double sinc_pi(double x) { return x == 0 ? 1.0 : std::sin(pi * x) / (pi * x); }

// Composite fixed 30-point Gauss over equal pieces, used as an oracle.
template <class Fn>
double integrate(Fn f, double a, double b, int pieces) {
    double s = 0;
    for (int k = 0; k < pieces; ++k) {
        const double p = a + (b - a) * k / pieces, q = a + (b - a) * (k + 1) / pieces;
        s += boost::math::quadrature::gauss<double, 30>::integrate(f, p, q);
    }
    return s;
}

}  // namespace

TEST_CASE("phi smoothing function") {
    const auto phi = make_phi();
    for (double x : {-2.3, -1.0, -0.4, 0.0, 0.25, 1.0, 3.7}) {
        const double want = std::pow(sinc_pi(x - 1), 2) + std::pow(sinc_pi(x), 2) + std::pow(sinc_pi(x + 1), 2);
        CHECK(phi.value(x) == doctest::Approx(want).epsilon(1e-14));
    }
    for (double x = -1; x <= 1; x += 0.125) CHECK(phi.value(x) > 0.4);
    CHECK(phi.fourier(1.0) == 0.0);
    CHECK(phi.fourier(-1.5) == 0.0);
    // Fourier inversion of the transform gives the function back
    for (double x : {0.0, 0.3, 1.7}) {
        const double inv = integrate([&](double xi) { return phi.fourier(xi) * std::cos(2 * pi * xi * x); }, -1, 1, 8);
        CHECK(inv == doctest::Approx(phi.value(x)).epsilon(1e-12));
    }
}

TEST_CASE("Ingham F0 positivity, support and decay") {
    const auto F = make_ingham(50);
    const Ingham& I = *F.ingham;
    CHECK(F.value(0) == doctest::Approx(1.0).epsilon(1e-15));
    double sum_a = 0;
    for (double a : I.widths()) sum_a += a;
    CHECK(sum_a == doctest::Approx(0.5).epsilon(1e-14));
    for (int i = 0; i <= 4000; ++i) {
        const double x = -200 + 0.1 * i;
        const double v = F.value(x);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
    }
    for (int i = 0; i <= 2000; ++i) CHECK(F.fourier(-1.0 + 0.001 * i) >= -1e-15);
    // table and direct quadrature agree inside the band
    for (double xi : {0.0, 0.1, 0.33, 0.5, 0.77, 0.9})
        CHECK(std::abs(I.F0_hat(xi) - I.F0_hat_quad(xi)) < 1e-13);
    // mass outside [-1, 1], from the untabulated transform
    const double out = 2 * integrate([&](double xi) { return std::abs(I.F0_hat_quad(xi)); }, 1.0, 3.0, 32);
    MESSAGE("F0^ mass outside [-1,1]: " << out);
    CHECK(out <= 1e-8);
    CHECK(I.l1() == doctest::Approx(I.F0_hat(0)).epsilon(1e-13));

    // decay envelope e^{-x / log^2(x + 10)} with a calibration constant
    double worst = 0;
    for (double x = 10; x <= 1000; x += 0.05) worst = std::max(worst, F.value(x) / std::exp(-x / std::pow(std::log(x + 10), 2)));
    MESSAGE("decay calibration constant: " << worst);
    CHECK(worst <= 1.0);

    CHECK_THROWS_AS(make_ingham(5), DomainError);
}

TEST_CASE("normalized F integrates to one") {
    const auto F = make_normalized_F(50);
    // F^ is supported in [-1, 1], so the step-1/2 Riemann sum is exact up to
    // truncation (Poisson summation).
    double s = 0;
    for (int k = -800; k <= 800; ++k) s += 0.5 * F.value(0.5 * k);
    CHECK(std::abs(s - 1.0) <= 1e-8);
    CHECK(F.fourier(0) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("bump G: range, display, tails") {
    for (double D : {3.0, 5.0, 8.0}) {
        CAPTURE(D);
        const auto g = make_bump(D, 3);
        double lo = INFINITY, hi = -INFINITY;
        for (int i = 0; i <= 10000; ++i) {
            const double x = -1.0 + 2.5 * i / 10000.0;
            const double v = g.value(x);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        CHECK(lo >= -1e-9);
        CHECK(hi <= 1 + 1e-9);
        CHECK(g.value(-10) <= 1e-6);
        CHECK(g.support_violation_mass() <= 1e-8);
        const double l1 = g.l1_fourier();
        MESSAGE("Delta " << D << ": int |G^| = " << l1);
        CHECK(l1 <= 2 * std::pow(D, 6));
        const double mid = 0.5 / D;
        CHECK(g.value(mid) >= 1.0 / (1.0 + 1e-6));
    }
    // substituted display against adaptive quadrature of the display itself
    const auto g = make_bump(3, 3);
    for (double x : {-0.05, -0.02, 0.0, 0.1, 0.34, 0.36})
        CHECK(std::abs(g.value(x) - g.value_adaptive(x)) < 1e-10);
    CHECK_THROWS_AS(make_bump(2, 3), DomainError);
}

TEST_CASE("bump G: Fourier inversion") {
    const auto g = make_bump(3, 3);
    const double S = g.S();
    // G(x) = \int G^(xi) e^{2 pi i xi x}; integrate over eta = xi / S in pieces
    for (double x : {0.0, 0.05, 0.2, 0.4}) {
        auto re = [&](double eta) {
            const cplx v = g.fourier(S * eta) * std::polar(1.0, 2 * pi * S * eta * x);
            return S * v.real();
        };
        const double inv = integrate(re, -1.0, 1.0, 2000);
        CHECK(std::abs(inv - g.value(x)) < 1e-9);
    }
}

TEST_CASE("bump sandwich constants") {
    auto r = seed_stream(41, 0);
    for (double D : {3.0, 5.0, 8.0}) {
        const auto g = make_bump(D, 3);
        std::vector<double> xs(5000);
        for (auto& x : xs) x = -0.5 + 1.2 * r.uniform();
        const auto rep = bump_sandwich_check(g, xs);
        MESSAGE("Delta " << D << ": C_lower " << rep.C_lower << ", C_upper " << rep.C_upper);
        CHECK(rep.holding == rep.samples);
        CHECK(std::isfinite(rep.C_lower));
        CHECK(std::isfinite(rep.C_upper));
        CHECK(rep.range_lo >= -1e-9);
        CHECK(rep.range_hi <= 1 + 1e-9);
    }
}

TEST_CASE("truncated expansion") {
    const double D = 3, A = 3;
    const auto g = make_bump(D, A);
    const auto d = make_expansion(g, 60);
    CHECK(d.L() == 60);
    CHECK(std::abs(d.c[0] - g.value(0)) < 1e-10);
    for (int l = 0; l <= 60; ++l) {
        const double bound = std::exp(l * std::log(2 * pi) - std::lgamma(l + 1.0) + 2 * A * (l + 1) * std::log(D)) * 2;
        CHECK(std::abs(d.c[l]) <= bound);
    }
    // |D - G| within truncation tail plus quadrature allowance on |x| <= Delta^{1/4}
    const double R = std::pow(D, 0.25);
    int meaningful = 0;
    for (int i = -200; i <= 200; ++i) {
        const double x = R * i / 200.0;
        const double gap = std::abs(d.value(x) - g.value(x));
        const double allow = std::exp(d.log_tail_bound(x)) + d.eval_error_bound(x);
        CHECK(gap <= allow);
        if (allow < 1e-6) ++meaningful;
    }
    MESSAGE(meaningful << " of 401 grid points have an allowance below 1e-6");
    CHECK(meaningful > 0);
    CHECK(std::abs(d.value(1e-3) - 1.0) < 1e-9);
    // bin center
    CHECK(std::norm(d.value(0.5 / D)) >= 0.9);
    CHECK_THROWS_AS(make_expansion(g, 61), CapacityError);
}

TEST_CASE("symmetrized bump moments") {
    const double D = 3;
    const auto g = make_bump(D, 3, -0.5 / D);
    CHECK(g.value(0.1) == doctest::Approx(g.value(-0.1)).epsilon(1e-12));
    const auto d = make_expansion(g, 40);
    for (int l = 0; l <= 40; l += 2) CHECK(std::abs(d.c[l].imag()) <= 1e-10 * std::max(1.0, d.abs_moment[l]));
    for (int l = 1; l <= 40; l += 2) CHECK(std::abs(d.c[l]) <= 1e-10 * std::max(1.0, d.abs_moment[l]));
}

TEST_CASE("indicator sandwich with the truncated polynomial") {
    const double D = 3;
    const auto g = make_bump(D, 3);
    const auto d = make_expansion(g, 60);
    auto r = seed_stream(42, 0);
    std::vector<double> Y(2000);
    for (auto& y : Y) y = std::sqrt(0.5) * r.normal();
    const auto rep = indicator_sandwich_check(g, d, Y, std::pow(D, 0.25), 2000);
    MESSAGE("pairs " << rep.pairs << ", in bin " << rep.in_bin << ", C " << rep.C_measured << ", min |D|^2 "
                     << rep.min_abs2_in_bin);
    CHECK(rep.in_bin > 0);
    CHECK(rep.holding == rep.pairs);
}

TEST_CASE("tuple set on a toy chain") {
    ChainSpec s;
    s.r = 1;
    s.k = 3;
    s.Delta = [](int j) { return double(j + 1); };
    s.L = [](int j) { return -1.0 - 0.5 * j; };
    s.U = [](int j) { return 0.5 + 0.25 * j; };
    s.m = [](int j) { return 0.1 * j; };
    s.u_bound = 3.0;
    const double v = 0.2, w = 0.0;
    const auto got = enumerate_tuples(s, v, w);
    // oracle: full product grid, then filter
    std::vector<std::vector<double>> want;
    for (int a = -9; a <= 9; ++a)
        for (int b = -12; b <= 12; ++b) {
            const double u2 = a / 3.0, u3 = b / 4.0;
            const double p2 = v + u2 - 0.2, p3 = v + u2 + u3 - 0.3;
            if (p2 < s.L(2) - 1 || p2 > s.U(2) + 1) continue;
            if (p3 < s.L(3) - 1 || p3 > s.U(3) + 1) continue;
            if (std::abs(u2 + u3 + v - w) > 1) continue;
            want.push_back({u2, u3});
        }
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i][0] == doctest::Approx(want[i][0]));
        CHECK(got[i][1] == doctest::Approx(want[i][1]));
    }
    CHECK(!got.empty());
}

TEST_CASE("Poisson window") {
    const PoissonWindow V{1.0, 1e-14, &default_ingham()};
    for (double x : {0.0, 0.3, 0.999, 1.0}) CHECK(V.V(x) == doctest::Approx(1.0).epsilon(1e-12));
    for (double x : {-1.01, -1.5, 2.01}) CHECK(V.V(x) == 0.0);
    CHECK(std::abs(V.V_hat(0)) == doctest::Approx(2.0).epsilon(1e-14));
    PoissonWindow bad = V;
    bad.eps = 0;
    CHECK_THROWS_AS(poisson_reconstruct({1.0, 0.0}, 0, 0, bad), ContractError);
    CHECK_THROWS_AS(poisson_reconstruct({1.0}, 0, 0, V), ContractError);
}

TEST_CASE("Poisson reconstruction") {
    const PoissonWindow V{1.0, 1e-14, &default_ingham()};
    const cplx one = poisson_reconstruct({1.0, 0.0}, 12.5, 0.7, V);
    CHECK(std::abs(one - 1.0) < 1e-12);

    auto r = seed_stream(43, 0);
    for (int it = 0; it < 5; ++it) {
        const std::size_t N = 2 + static_cast<std::size_t>(r.uniform() * 4000);
        std::vector<cplx> c(N, 0.0);
        c[N - 1] = 1.0;
        const double t = 1e4 * r.uniform(), h0 = 4 * r.uniform() - 2;
        const cplx want = std::pow(double(N), -0.5) * std::polar(1.0, -(t + h0) * std::log(double(N)));
        CHECK(std::abs(poisson_reconstruct(c, t, h0, V) - want) < 1e-10 * std::abs(want));
    }

    double worst = 0;
    for (int it = 0; it < 100; ++it) {
        const std::size_t N = 2 + static_cast<std::size_t>(r.uniform() * 4095);
        std::vector<cplx> c(N);
        for (auto& x : c) x = cplx(r.normal(), r.normal());
        const double t = 1e5 * r.uniform(), h0 = 4 * r.uniform() - 2;
        const cplx a = poisson_reconstruct(c, t, h0, V), b = dirichlet_eval(c, t + h0);
        worst = std::max(worst, std::abs(a - b) / std::abs(b));
    }
    MESSAGE("max relative reconstruction error " << worst);
    CHECK(worst <= 1e-9);
}

TEST_CASE("discretized max bound") {
    auto r = seed_stream(44, 0);
    const std::vector<std::vector<cplx>> flat{std::vector<cplx>(64, 1.0)};
    const auto f = discretized_max_bound(flat, 0.0);
    CHECK(std::isfinite(f.ratio));
    CHECK(f.ratio > 0);

    double worst = 0;
    for (int it = 0; it < 10; ++it) {
        std::vector<std::vector<cplx>> polys(3, std::vector<cplx>(1024));
        for (auto& p : polys)
            for (auto& x : p) x = cplx(r.normal(), r.normal());
        const auto rep = discretized_max_bound(polys, 1e4 * r.uniform());
        worst = std::max(worst, rep.ratio);
        CHECK(rep.rhs_tail <= 1e-6 * (rep.rhs_core + rep.rhs_tail));
    }
    MESSAGE("max discretization ratio " << worst);
    CHECK(worst <= 10);
}

TEST_CASE("bump csv") {
    const auto g = make_bump(3, 3);
    const auto d = make_expansion(g, 4);
    std::ostringstream os;
    write_bump_csv(os, g, d, {0.0, 0.1});
    CHECK(os.str().rfind("x,G,D_real,D_imag\n0,", 0) == 0);
}
