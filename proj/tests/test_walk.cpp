#include <doctest.h>

#include <cmath>
#include <complex>
#include <sstream>

#include "fixtures.hpp"
#include "zlab/dirichlet_walk.hpp"
#include "zlab/errors.hpp"
#include "zlab/rng.hpp"

using namespace zlab;

namespace {

const PrimeTable& tab() { return zt::table(10'000'000); }

// Independent oracle: std::pow on complex exponents, long double phase.
cplx direct(const std::vector<std::uint64_t>& ps, double tau, double h) {
    std::complex<long double> acc = 0;
    for (auto p : ps) {
        const long double lp = std::log(static_cast<long double>(p));
        const long double ph = -(static_cast<long double>(tau) + h) * lp;
        const std::complex<long double> z = std::polar(1.0L / std::sqrt(static_cast<long double>(p)), ph);
        acc += z + 0.5L * z * z;
    }
    return {static_cast<double>(acc.real()), static_cast<double>(acc.imag())};
}

std::vector<std::uint64_t> primes_between(double j, double k) {
    auto s = primes_of(tab(), primes_in_log_range(tab(), j, k));
    return {s.begin(), s.end()};
}

}  // namespace

TEST_CASE("partial_sum examples") {
    const cplx v = partial_sum(tab(), 0, 1, 0, 0);
    CHECK(v.real() == doctest::Approx(2.403400).epsilon(1e-6));
    CHECK(std::abs(v.imag()) < 1e-15);
    CHECK(v.real() == doctest::Approx(direct({3, 5, 7, 11, 13}, 0, 0).real()).epsilon(1e-14));
    CHECK(partial_sum(tab(), 1.3, 1.3, 5, 0) == cplx{});
    const cplx one = range_sum(tab(), PrimeRange{1, 2}, cplx(0.5, 0));
    CHECK(one.real() == doctest::Approx(0.744017).epsilon(1e-6));
}

TEST_CASE("grid evaluation vs pointwise on random configurations") {
    auto g = seed_stream(17, 0);
    const auto ps = primes_between(0.0, 2.5);
    double worst = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const double tau = g.uniform() * 1e6;
        WalkConfig c;
        c.k_start = 0;
        c.scales = {1.0, 2.0, 2.5};
        c.tau = tau;
        c.grid = ShiftGrid{-2.0 + 1.75 * g.uniform(), 1e-3 * (0.5 + g.uniform()), 1500};
        const auto w = evaluate_on_grid(tab(), c);
        const std::size_t j = static_cast<std::size_t>(g() % c.grid.count);
        const cplx ref = direct(ps, tau, c.grid.at(j));
        worst = std::max(worst, std::abs(w.tilde(2, j) - ref));
    }
    CHECK(worst < 1e-10);
}

TEST_CASE("grid special cases") {
    WalkConfig c;
    c.scales = {2.0};
    c.tau = 12345.678;
    c.grid = ShiftGrid{0.37, 0.0, 1};
    auto w = evaluate_on_grid(tab(), c);
    CHECK(std::abs(w.tilde(0, 0) - partial_sum(tab(), 0, 2, 12345.678, 0.37)) < 1e-12);

    c.grid = ShiftGrid{0.0, 0.013, 2};
    w = evaluate_on_grid(tab(), c);
    CHECK(std::abs(w.tilde(0, 1) - direct(primes_between(0, 2), 12345.678, 0.013)) < 1e-10);

    // conjugate symmetry at tau = 0 on a grid symmetric about 0
    c.tau = 0;
    c.grid = ShiftGrid{-1.0, 0.001, 2001};
    w = evaluate_on_grid(tab(), c);
    double asym = 0;
    for (std::size_t j = 0; j < 2001; ++j) asym = std::max(asym, std::abs(w.tilde(0, j) - std::conj(w.tilde(0, 2000 - j))));
    CHECK(asym < 1e-12);

    c.grid = ShiftGrid{-1.0, 0.01, 500};  // ends beyond 2
    CHECK_THROWS_AS(evaluate_on_grid(tab(), c), DomainError);
    c.grid = ShiftGrid{0, 0, 1};
    c.scales = {3.0};
    CHECK_THROWS_AS(evaluate_on_grid(tab(), c), CapacityError);
}

TEST_CASE("long walks keep unit modulus through re-anchoring") {
    // 2^20 shifts with a single prime: every cell must equal the direct phase.
    WalkConfig c;
    c.k_start = 0.0;
    c.scales = {0.9};  // only p = 3 ... 11: e < p <= e^{e^0.9}
    c.grid = ShiftGrid{-2.0, 4.0 / (1 << 20), 1 << 20};
    c.workers = 3;
    const auto w = evaluate_on_grid(tab(), c);
    const auto ps = primes_between(0.0, 0.9);
    double worst = 0;
    for (std::size_t j = 0; j < c.grid.count; j += 997) worst = std::max(worst, std::abs(w.tilde(0, j) - direct(ps, 0, c.grid.at(j))));
    CHECK(worst < 1e-12);
}

TEST_CASE("workers do not change grid results") {
    WalkConfig c;
    c.scales = {1.5, 2.2};
    c.tau = 777.0;
    c.grid = ShiftGrid{-2.0, 1e-3, 4000};
    c.workers = 1;
    const auto a = evaluate_on_grid(tab(), c);
    c.workers = 8;
    const auto b = evaluate_on_grid(tab(), c);
    CHECK(a.values == b.values);
}

TEST_CASE("increments telescope") {
    WalkConfig c;
    c.scales = {0.0, 1.0, 2.0};
    c.grid = ShiftGrid{0, 0, 1};
    auto w = evaluate_on_grid(tab(), c);
    auto y = increments(w);
    CHECK(std::abs(y[1] - partial_sum(tab(), 1, 2, 0, 0)) < 1e-12);

    c.scales = {1.0, 1.0};
    w = evaluate_on_grid(tab(), c);
    CHECK(increments(w)[0] == cplx{});

    auto g = seed_stream(3, 3);
    for (int trial = 0; trial < 20; ++trial) {
        c.scales = {0.5, 1.0 + g.uniform(), 2.1, 2.4, 2.7};
        c.tau = 1e5 * g.uniform();
        c.grid = ShiftGrid{-1, 0.01, 50};
        w = evaluate_on_grid(tab(), c);
        y = increments(w);
        for (std::size_t j = 0; j < 50; ++j) {
            cplx s{};
            for (std::size_t i = 0; i < 4; ++i) s += y[i * 50 + j];
            CHECK(std::abs(s - (w.tilde(4, j) - w.tilde(0, j))) <= 1e-10);
            for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(w.S(i, j)) <= std::abs(w.tilde(i, j)));
        }
        // increment equals an independent range sum
        CHECK(std::abs(y[2 * 50 + 7] - partial_sum(tab(), 2.1, 2.4, c.tau, c.grid.at(7))) < 1e-10);
    }
    CHECK_THROWS_AS(increments(MultiscaleWalk{{1.0}, ShiftGrid{}, {cplx{}}}), StructuralError);
}

TEST_CASE("higher order tail") {
    CHECK(higher_order_tail(tab(), 1, 1, cplx(0.5, 3)) == 0.0);
    // bound for ranges starting at 3
    double bound = 0;
    for (auto p : primes_between(0, 2.5)) bound += std::pow(double(p), -1.5) / (1 - std::pow(double(p), -0.5));
    auto g = seed_stream(5, 5);
    for (int i = 0; i < 10; ++i) CHECK(std::abs(higher_order_tail(tab(), 0, 2.5, cplx(0.5, 1e4 * g.uniform()))) <= bound);
    // single prime vs logarithm oracle
    for (std::uint64_t p : {3ull, 5ull, 101ull, 10007ull}) {
        const std::size_t i = tab().count_upto(double(p)) - 1;
        for (double t : {0.0, 1.7, 1234.5}) {
            const cplx s(0.5, t);
            const cplx z = std::exp(-s * std::log(double(p)));
            const double closed = -std::log(std::abs(1.0 - z)) - (z + 0.5 * z * z).real();
            CHECK(std::abs(higher_order_tail(tab(), PrimeRange{i, i + 1}, s) - closed) < 1e-12);
        }
    }
}

TEST_CASE("euler product identity") {
    auto e = euler_product_check(tab(), 1, 1, cplx(0.5, 0));
    CHECK(e.lhs == 1.0);
    CHECK(e.rhs == 1.0);
    // p in {3, 5} at s = 1/2 against the direct product
    e = euler_product_check(tab(), PrimeRange{1, 3}, cplx(0.5, 0));
    CHECK(std::abs(e.rhs - (1 - 1 / std::sqrt(3.0)) * (1 - 1 / std::sqrt(5.0))) < 1e-14);
    CHECK(e.residual <= 1e-12);
    auto g = seed_stream(8, 8);
    for (int i = 0; i < 5; ++i) {
        const double tau = 1e6 + 1e6 * g.uniform();
        e = euler_product_check(tab(), 0, 2, cplx(0.5, tau));
        CHECK(e.residual <= 1e-10);
        // direct complex product oracle
        std::complex<long double> prod = 1;
        for (auto p : primes_between(0, 2)) {
            const long double lp = std::log(static_cast<long double>(p));
            prod *= 1.0L - std::polar(1.0L / std::sqrt(static_cast<long double>(p)), -tau * lp);
        }
        CHECK(std::abs(e.rhs - static_cast<double>(std::abs(prod))) < 1e-11);
    }
}

TEST_CASE("walk csv") {
    WalkConfig c;
    c.scales = {1.0};
    c.grid = ShiftGrid{0, 0.5, 2};
    std::ostringstream os;
    write_walk_csv(evaluate_on_grid(tab(), c), os);
    CHECK(os.str().rfind("scale,h,re,im\n1,0,", 0) == 0);
}
