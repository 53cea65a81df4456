#include "zlab/harmonic_kit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <mutex>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "zlab/csv.hpp"
#include "zlab/errors.hpp"
#include "zlab/simd.hpp"

namespace zlab {

namespace {

constexpr double kPi = std::numbers::pi;

struct GL16 {
    std::array<double, 16> x{}, w{};
    GL16() {
        using Q = boost::math::quadrature::gauss<double, 16>;
        const auto& ab = Q::abscissa();
        const auto& wt = Q::weights();
        for (std::size_t i = 0; i < 8; ++i) {
            x[i] = -ab[7 - i];
            w[i] = wt[7 - i];
            x[15 - i] = ab[7 - i];
            w[15 - i] = wt[7 - i];
        }
    }
};

const GL16& gl16() {
    static const GL16 g;
    return g;
}

// Composite 16-point Gauss-Legendre over [lo, hi] in n equal panels.
template <class Fn>
auto gl_panels(double lo, double hi, std::size_t n, Fn&& f) {
    const auto& g = gl16();
    const double w = (hi - lo) / static_cast<double>(n);
    decltype(f(lo)) s{};
    for (std::size_t k = 0; k < n; ++k) {
        const double c = lo + (static_cast<double>(k) + 0.5) * w;
        decltype(f(lo)) p{};
        for (int i = 0; i < 16; ++i) p += g.w[i] * f(c + 0.5 * w * g.x[i]);
        s += 0.5 * w * p;
    }
    return s;
}

// sin(u) / u
double sinc(double u) {
    if (std::abs(u) < 1e-4) {
        const double u2 = u * u;
        return 1.0 - u2 / 6.0 + u2 * u2 / 120.0;
    }
    return std::sin(u) / u;
}

}  // namespace

// ---------------------------------------------------------------- Ingham

Ingham::Ingham(int K) {
    if (K < 10) throw DomainError("harmonic_kit", "Ingham truncation needs K >= 10");
    a_.resize(K);
    double s = 0;
    for (int j = 1; j <= K; ++j) {
        const double l = std::log(j + 2.0);
        a_[j - 1] = 1.0 / (j * l * l);
        s += a_[j - 1];
    }
    for (auto& a : a_) a *= 0.5 / s;

    X_ = 8;
    while (envelope(X_) > 1e-40) X_ += 8;
    const std::size_t npan = static_cast<std::size_t>(std::ceil(X_ / w_));
    X_ = static_cast<double>(npan) * w_;

    tail_.assign(npan + 1, 0.0);
    for (std::size_t k = npan; k-- > 0;)
        tail_[k] = tail_[k + 1] + panel_integral(static_cast<double>(k) * w_, static_cast<double>(k + 1) * w_);
    l1_ = 2.0 * tail_[0];

    // Nodes for the cosine transform; F0 < 1e-20 is dropped there.
    double Xh = 8;
    while (envelope(Xh) > 1e-20) Xh += 4;
    const auto& g = gl16();
    const std::size_t nh = static_cast<std::size_t>(std::ceil(Xh / w_));
    for (std::size_t k = 0; k < nh; ++k) {
        const double c = (static_cast<double>(k) + 0.5) * w_;
        for (int i = 0; i < 16; ++i) {
            nodes_.push_back(c + 0.5 * w_ * g.x[i]);
            wts_.push_back(0.5 * w_ * g.w[i]);
            f_at_nodes_.push_back(F0(nodes_.back()));
        }
    }

    // hat_[k] = 2 sum_i w_i F0(x_i) cos(2 pi k h x_i), by rotation in k with a
    // fresh anchor every 128 steps.
    const std::size_t nt = static_cast<std::size_t>(1.0 / hstep_) + 17;
    hat_.assign(nt, 0.0);
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const double wf = 2.0 * wts_[i] * f_at_nodes_[i];
        const double x = nodes_[i];
        const cplx step = std::polar(1.0, 2 * kPi * hstep_ * x);
        cplx z = 1.0;
        for (std::size_t k = 0; k < nt; ++k) {
            if (k % 128 == 0) z = std::polar(1.0, 2 * kPi * (static_cast<double>(k) * hstep_) * x);
            hat_[k] += wf * z.real();
            z *= step;
        }
    }
}

double Ingham::hat_noise() const {
    // the table past xi = 1 should vanish; what is left is rounding
    double m = 0;
    for (std::size_t k = static_cast<std::size_t>(1.0 / hstep_); k < hat_.size(); ++k) m = std::max(m, std::abs(hat_[k]));
    return 4.0 * std::max(m, 1e-17);
}

double Ingham::F0(double x) const {
    double r = 1.0;
    for (double a : a_) {
        const double s = sinc(2 * kPi * a * x);
        r *= s * s;
    }
    return r;
}

double Ingham::envelope(double x) const {
    double r = 1.0;
    for (double a : a_) {
        const double u = 2 * kPi * a * std::abs(x);
        if (u > 1) r /= u * u;
    }
    return r;
}

double Ingham::panel_integral(double lo, double hi) const {
    return gl_panels(lo, hi, 1, [&](double x) { return F0(x); });
}

double Ingham::F0_hat_quad(double xi) const {
    double s = 0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) s += wts_[i] * f_at_nodes_[i] * std::cos(2 * kPi * xi * nodes_[i]);
    return 2.0 * s;
}

double Ingham::F0_hat(double xi) const {
    xi = std::abs(xi);
    if (xi >= 1.0) return 0.0;
    const double s = xi / hstep_;
    const auto k = static_cast<long>(std::floor(s));
    if (s == static_cast<double>(k)) return hat_[static_cast<std::size_t>(k)];
    // 8-point barycentric Lagrange on nodes k-3 .. k+4; the table is even.
    static constexpr double wb[8] = {1, -7, 21, -35, 35, -21, 7, -1};
    double num = 0, den = 0;
    for (int j = 0; j < 8; ++j) {
        const long idx = k - 3 + j;
        const double f = hat_[static_cast<std::size_t>(std::abs(idx))];
        const double c = wb[j] / (s - static_cast<double>(idx));
        num += c * f;
        den += c;
    }
    return num / den;
}

double Ingham::F_tail(double u) const {
    if (u < 0) return 1.0 - F_tail(-u);
    const auto k = static_cast<std::size_t>(std::floor(u / w_));
    if (k + 1 >= tail_.size()) return 0.0;
    const double edge = static_cast<double>(k + 1) * w_;
    return (tail_[k + 1] + panel_integral(u, edge)) / l1_;
}

const Ingham& default_ingham() {
    static const Ingham F(50);
    return F;
}

// ------------------------------------------------------ SmoothingFunction

double SmoothingFunction::value(double x) const {
    switch (kind) {
        case SmoothingKind::ingham_F0: return ingham->F0(x);
        case SmoothingKind::normalized_F: return ingham->F0(x) / ingham->l1();
        case SmoothingKind::phi: {
            double s = 0;
            for (int d = -1; d <= 1; ++d) {
                const double v = sinc(kPi * (x + d));
                s += v * v;
            }
            return s;
        }
    }
    return 0;
}

double SmoothingFunction::fourier(double xi) const {
    switch (kind) {
        case SmoothingKind::ingham_F0: return ingham->F0_hat(xi);
        case SmoothingKind::normalized_F: return ingham->F0_hat(xi) / ingham->l1();
        case SmoothingKind::phi: {
            const double t = 1.0 - std::abs(xi);
            return t > 0 ? t * (1.0 + 2.0 * std::cos(2 * kPi * xi)) : 0.0;
        }
    }
    return 0;
}

namespace {
std::shared_ptr<const Ingham> shared_ingham(int K) {
    static std::mutex mu;
    static std::vector<std::shared_ptr<const Ingham>> cache;
    std::lock_guard<std::mutex> lk(mu);
    for (auto& p : cache)
        if (p->K() == K) return p;
    cache.push_back(std::make_shared<const Ingham>(K));
    return cache.back();
}
}  // namespace

SmoothingFunction make_ingham(int K) { return {SmoothingKind::ingham_F0, shared_ingham(K)}; }
SmoothingFunction make_normalized_F(int K) { return {SmoothingKind::normalized_F, shared_ingham(K)}; }
SmoothingFunction make_phi() { return {SmoothingKind::phi, nullptr}; }

// --------------------------------------------------------------- G bump

BandlimitedBump::BandlimitedBump(double Delta, double A, double shift, const Ingham& F)
    : Delta_(Delta), A_(A), F_(&F) {
    if (Delta < 3 || A < 3) throw DomainError("harmonic_kit", "bump needs Delta, A >= 3");
    S_ = std::pow(Delta, 2 * A);
    lo_ = -std::pow(Delta, -A) + shift;
    hi_ = 1.0 / Delta + std::pow(Delta, -A) + shift;
}

double BandlimitedBump::value(double x) const {
    // u = S (x - t) runs over [L, U]
    const double L = S_ * (x - hi_), U = S_ * (x - lo_);
    if (L >= 0) return F_->F_tail(L) - F_->F_tail(U);
    if (U <= 0) return F_->F_tail(-U) - F_->F_tail(-L);
    return 1.0 - F_->F_tail(-L) - F_->F_tail(U);
}

double BandlimitedBump::value_adaptive(double x, double tol) const {
    // outside |x - t| <= X / S the integrand is below 1e-40
    const double r = F_->cutoff() / S_;
    const double a = std::max(lo_, x - r), b = std::min(hi_, x + r);
    if (a >= b) return 0.0;
    auto f = [&](double t) { return S_ * F_->F0(S_ * (x - t)) / F_->l1(); };
    // pieces of width <= 4/S so no oscillation of F is skipped
    const std::size_t n = static_cast<std::size_t>(std::ceil((b - a) * S_ / 4.0));
    double s = 0, err = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double p = a + (b - a) * static_cast<double>(k) / static_cast<double>(n);
        const double q = a + (b - a) * static_cast<double>(k + 1) / static_cast<double>(n);
        double e = 0;
        s += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, p, q, 10, tol, &e);
        err += e;
    }
    // Kronrod estimates are pessimistic by orders of magnitude on smooth pieces
    if (err > 1e5 * tol * std::max(1.0, std::abs(s))) throw ToleranceError("harmonic_kit", "bump quadrature did not converge (error " + format_double(err) + ")");
    return s;
}

cplx BandlimitedBump::fourier(double xi) const {
    const double eta = xi / S_;
    if (std::abs(eta) >= 1.0) return 0.0;
    const double len = hi_ - lo_;
    const cplx ph = std::polar(1.0, -kPi * xi * (lo_ + hi_));
    return ph * (len * sinc(kPi * xi * len)) * (F_->F0_hat(eta) / F_->l1());
}

double BandlimitedBump::l1_fourier() const {
    // 2 S \int_0^1 |sinc part| F^(eta) d eta, panels between zeros of sin
    const double len = hi_ - lo_;
    const double zstep = 1.0 / (S_ * len);
    const std::size_t nz = static_cast<std::size_t>(std::ceil(1.0 / zstep));
    const auto& g = gl16();
    double s = 0;
    for (std::size_t k = 0; k < nz; ++k) {
        const double p = static_cast<double>(k) * zstep, q = std::min(1.0, p + zstep);
        const double c = 0.5 * (p + q), h = 0.5 * (q - p);
        for (int i = 0; i < 16; ++i) {
            const double eta = c + h * g.x[i];
            s += h * g.w[i] * std::abs(len * sinc(kPi * S_ * eta * len)) * F_->F0_hat(eta);
        }
    }
    return 2.0 * S_ * s / F_->l1();
}

double BandlimitedBump::support_violation_mass() const {
    // For |xi| > S, |1^(xi)| <= 1 / (pi |xi|); bound the rest with the direct
    // (untabulated) transform of F0 on [1, 4].
    const double m = gl_panels(1.0, 4.0, 96, [&](double eta) { return std::abs(F_->F0_hat_quad(eta)) / (kPi * eta); });
    return 2.0 * m / F_->l1();
}

BandlimitedBump make_bump(double Delta, double A, double shift, const Ingham& F) {
    return BandlimitedBump(Delta, A, shift, F);
}

// ------------------------------------------------------------ expansion

TruncatedExpansion make_expansion(const BandlimitedBump& g, int L_max) {
    if (L_max < 0) throw DomainError("harmonic_kit", "L_max must be >= 0");
    if (L_max > kMaxExpansionOrder) throw CapacityError("harmonic_kit", "L_max above the double-precision guard (60)");
    const double S = g.S();
    const double fmax = S * std::max(std::abs(g.lo()), std::abs(g.hi()));
    const std::size_t npan = std::max<std::size_t>(128, static_cast<std::size_t>(std::ceil(2.0 * fmax)));
    const int L = L_max;
    std::vector<cplx> I(L + 1);
    std::vector<double> J(L + 1), Nz(L + 1);
    const auto& q = gl16();
    const double w = 2.0 / static_cast<double>(npan);
    const double len = g.hi() - g.lo(), mid = g.lo() + g.hi();
    const double l1 = g.F().l1();
    for (std::size_t k = 0; k < npan; ++k) {
        const double c = -1.0 + (static_cast<double>(k) + 0.5) * w;
        for (int i = 0; i < 16; ++i) {
            const double eta = c + 0.5 * w * q.x[i];
            const double wt = 0.5 * w * q.w[i];
            const double sc = len * sinc(kPi * S * eta * len);
            const double mag = sc * g.F().F0_hat(eta) / l1;
            if (mag == 0.0) continue;
            const cplx v = std::polar(mag, -kPi * S * eta * mid);
            double pw = 1.0;
            for (int l = 0; l <= L; ++l) {
                I[l] += wt * pw * v;
                J[l] += wt * std::abs(pw * mag);
                Nz[l] += wt * std::abs(pw * sc);
                pw *= eta;
            }
        }
    }
    TruncatedExpansion d;
    d.Delta = g.Delta();
    d.A = g.A();
    d.c.resize(L + 1);
    d.abs_moment.resize(L + 1);
    d.noise_moment.resize(L + 1);
    d.l1_hat = S * J[0];
    const cplx ipow[4] = {1.0, cplx(0, 1), -1.0, cplx(0, -1)};
    for (int l = 0; l <= L; ++l) {
        // (2 pi)^l / l! * S^{l+1}
        const double ls = l * std::log(2 * kPi) - std::lgamma(l + 1.0) + (l + 1.0) * std::log(S);
        if (ls > 700) throw CapacityError("harmonic_kit", "expansion coefficient overflows double");
        const double sc = std::exp(ls);
        d.c[l] = ipow[l % 4] * sc * I[l];
        d.abs_moment[l] = sc * J[l];
        d.noise_moment[l] = sc * Nz[l] * g.F().hat_noise() / l1;
    }
    return d;
}

cplx TruncatedExpansion::value(double x) const {
    cplx s{};
    for (int l = L(); l >= 0; --l) s = s * x + c[l];
    return s;
}

double TruncatedExpansion::log_tail_bound(double x) const {
    const double z = 2 * kPi * std::pow(Delta, 2 * A) * std::abs(x);
    if (z == 0.0) return -INFINITY;
    const int n = L() + 1;
    const double lz = std::log(z);
    double lsum;
    if (z > n) {
        // sum_{l >= n} z^l / l! = e^z P(n, z)
        lsum = z + std::log(boost::math::gamma_p(static_cast<double>(n), z));
    } else {
        double m = -INFINITY;
        std::vector<double> t;
        for (int l = n; l < n + 400; ++l) {
            t.push_back(l * lz - std::lgamma(l + 1.0));
            m = std::max(m, t.back());
            if (t.back() < m - 50) break;
        }
        double s = 0;
        for (double v : t) s += std::exp(v - m);
        lsum = m + std::log(s);
    }
    return lsum + std::log(l1_hat);
}

double TruncatedExpansion::eval_error_bound(double x, double tol) const {
    double s = 0, p = 1;
    for (std::size_t l = 0; l < abs_moment.size(); ++l) {
        s += (tol * abs_moment[l] + noise_moment[l]) * p;
        p *= std::abs(x);
    }
    return s;
}

// ------------------------------------------------------ sandwich checks

SandwichReport bump_sandwich_check(const BandlimitedBump& g, const std::vector<double>& xs, std::size_t grid) {
    const double e1 = std::exp(-std::pow(g.Delta(), g.A() - 1));
    const double b0 = g.lo() + std::pow(g.Delta(), -g.A());  // bin [b0, b1]
    const double b1 = b0 + 1.0 / g.Delta();
    const double wpad = std::pow(g.Delta(), -g.A() / 2);
    const double w0 = b0 - wpad, w1 = b1 + wpad;
    SandwichReport r;
    r.range_lo = INFINITY;
    r.range_hi = -INFINITY;
    auto visit = [&](double x) {
        const double G = g.value(x);
        r.range_lo = std::min(r.range_lo, G);
        r.range_hi = std::max(r.range_hi, G);
        if (x >= b0 && x <= b1) r.C_lower = std::max(r.C_lower, (G > 0 ? 1.0 / G - 1.0 : INFINITY) / e1);
        if (x < w0 || x > w1) r.C_upper = std::max(r.C_upper, G / e1);
    };
    const double gl = b0 - 1.0, gh = b1 + 1.0;
    for (std::size_t i = 0; i <= grid; ++i) visit(gl + (gh - gl) * static_cast<double>(i) / static_cast<double>(grid));
    for (double x : {b0, b1, std::nextafter(w0, -INFINITY), std::nextafter(w1, INFINITY)}) visit(x);
    r.C_lower = std::max(0.0, r.C_lower);
    for (double x : xs) {
        const double G = g.value(x);
        const bool in_bin = x >= b0 && x <= b1, in_wide = x >= w0 && x <= w1;
        const bool lower = !in_bin || 1.0 <= G * (1.0 + r.C_lower * e1) * (1 + 1e-15);
        const bool upper = G <= (in_wide ? 1.0 : 0.0) + r.C_upper * e1 * (1 + 1e-12) + 1e-300;
        ++r.samples;
        if (lower && upper) ++r.holding;
    }
    return r;
}

IndicatorReport indicator_sandwich_check(const BandlimitedBump& g, const TruncatedExpansion& d,
                                         const std::vector<double>& Y, double window, std::size_t grid) {
    const double e1 = std::exp(-std::pow(g.Delta(), g.A() - 1));
    const double width = 1.0 / g.Delta();
    IndicatorReport r;
    r.min_abs2_in_bin = INFINITY;
    for (std::size_t i = 0; i <= grid; ++i) {
        const double x = width * static_cast<double>(i) / static_cast<double>(grid);
        const double a2 = std::norm(d.value(x));
        r.C_measured = std::max(r.C_measured, (a2 > 0 ? 1.0 / a2 - 1.0 : INFINITY) / e1);
    }
    for (double y : Y) {
        const long k0 = static_cast<long>(std::ceil((y - window) / width));
        const long k1 = static_cast<long>(std::floor((y + window) / width));
        for (long k = k0; k <= k1; ++k) {
            const double x = y - static_cast<double>(k) * width;
            ++r.pairs;
            if (x < 0 || x > width) {
                ++r.holding;
                continue;
            }
            ++r.in_bin;
            const double a2 = std::norm(d.value(x));
            r.min_abs2_in_bin = std::min(r.min_abs2_in_bin, a2);
            if (1.0 <= a2 * (1.0 + r.C_measured * e1) * (1 + 1e-12)) ++r.holding;
        }
    }
    return r;
}

std::vector<std::vector<double>> enumerate_tuples(const ChainSpec& s, double v, double w) {
    std::vector<std::vector<double>> out;
    std::vector<double> cur;
    auto rec = [&](auto&& self, int j, double partial) -> void {
        if (j > s.k) {
            if (std::abs(partial + v - w) <= 1.0) out.push_back(cur);
            return;
        }
        const double D = s.Delta(j);
        const long m = static_cast<long>(std::floor(s.u_bound * D));
        for (long i = -m; i <= m; ++i) {
            const double u = static_cast<double>(i) / D;
            const double pos = v + partial + u - s.m(j);
            if (pos < s.L(j) - 1.0 || pos > s.U(j) + 1.0) continue;
            cur.push_back(u);
            self(self, j + 1, partial + u);
            cur.pop_back();
        }
    };
    rec(rec, s.r + 1, 0.0);
    return out;
}

// ---------------------------------------------------------------- Poisson

cplx PoissonWindow::V_hat(double xi) const {
    const double len = 1.0 + eps;
    return std::polar(len * sinc(kPi * xi * len) * F->F0(0.5 * eps * xi), -kPi * xi);
}

double PoissonWindow::V(double x) const {
    // \int_{-eps/2}^{1+eps/2} phi(x - t) dt with phi(y) = (2/eps) F0^(2y/eps)
    const double a = std::max(-0.5 * eps, x - 0.5 * eps), b = std::min(1.0 + 0.5 * eps, x + 0.5 * eps);
    if (a >= b) return 0.0;
    return gl_panels(a, b, 256, [&](double t) { return (2.0 / eps) * F->F0_hat(2.0 * (x - t) / eps); });
}

double PoissonWindow::reach() const {
    double xi = 1.0;
    while (std::min(1.0 + eps, 1.0 / (kPi * xi)) * F->envelope(0.5 * eps * xi) >= cut) xi *= 1.1;
    return xi;
}

cplx dirichlet_eval(const std::vector<cplx>& coeffs, double t) {
    cplx s{};
    for (std::size_t i = 0; i < coeffs.size(); ++i)
        if (coeffs[i] != cplx{}) s += coeffs[i] * int_pow_minus(i + 1, 0.5, static_cast<long double>(t));
    return s;
}

namespace {

// D(1/2 + i t + i (h0 + j dh)) for j < count, via the rotation kernel.
std::vector<cplx> dirichlet_grid(const std::vector<cplx>& coeffs, double t, double h0, double dh, std::size_t count) {
    const std::size_t n = coeffs.size();
    std::vector<double> lg(n), cr(n), ci(n);
    for (std::size_t i = 0; i < n; ++i) {
        lg[i] = std::log(static_cast<double>(i + 1));
        const cplx c = coeffs[i] * int_pow_minus(i + 1, 0.5, static_cast<long double>(t));
        cr[i] = c.real();
        ci[i] = c.imag();
    }
    std::vector<double> ore(count, 0.0), oim(count, 0.0);
    simd::RotateArgs a;
    a.logp = lg.data();
    a.c1re = cr.data();
    a.c1im = ci.data();
    a.nprimes = n;
    a.h0 = h0;
    a.dh = dh;
    a.j_begin = 0;
    a.j_end = count;
    a.out_re = ore.data();
    a.out_im = oim.data();
    simd::kernels().rotate_accumulate(a);
    std::vector<cplx> out(count);
    for (std::size_t j = 0; j < count; ++j) out[j] = {ore[j], oim[j]};
    return out;
}

}  // namespace

cplx poisson_reconstruct(const std::vector<cplx>& coeffs, double t, double h0, const PoissonWindow& V) {
    if (!(V.eps > 0) || V.F == nullptr) throw ContractError("harmonic_kit", "Poisson window needs eps > 0 and F0");
    if (coeffs.size() < 2) throw ContractError("harmonic_kit", "Poisson reconstruction needs length N >= 2");
    const double logN = std::log(static_cast<double>(coeffs.size()));
    const double spacing = 1.0 / (2.0 + V.eps);  // lattice step in V^ argument
    const double c = h0 * logN / (2 * kPi), R = V.reach();
    const long k0 = static_cast<long>(std::floor((c - R) / spacing));
    const long k1 = static_cast<long>(std::ceil((c + R) / spacing));
    const double dh = 2 * kPi / ((2.0 + V.eps) * logN);
    const auto vals = dirichlet_grid(coeffs, t, static_cast<double>(k0) * dh, dh, static_cast<std::size_t>(k1 - k0 + 1));
    cplx s{};
    // With the e^{-2 pi i x xi} convention the lattice weight is V^ at (h0 - h) log N / 2 pi.
    for (long k = k0; k <= k1; ++k) s += vals[static_cast<std::size_t>(k - k0)] * V.V_hat(c - static_cast<double>(k) * spacing);
    return s / (2.0 + V.eps);
}

DiscretizationReport discretized_max_bound(const std::vector<std::vector<cplx>>& polys, double t, double A,
                                           int fine_factor) {
    std::size_t N = 0;
    for (auto& p : polys) N = std::max(N, p.size());
    if (N < 2) throw ContractError("harmonic_kit", "discretization needs length N >= 2");
    const double logN = std::log(static_cast<double>(N));
    const double dh = 2 * kPi / (8 * logN);
    const long jc = static_cast<long>(std::floor(16 * logN));
    const long jt = 2 * jc + 64;  // weight beyond this is below 1e-300 for A >= 100
    DiscretizationReport r;
    const double fdh = dh / fine_factor;
    const std::size_t nf = static_cast<std::size_t>(std::ceil(4.0 / fdh)) + 1;
    std::vector<double> fine(nf, 0.0), coarse(2 * jt + 1, 0.0);
    for (auto& p : polys) {
        const auto f = dirichlet_grid(p, t, -2.0, fdh, nf);
        for (std::size_t i = 0; i < nf; ++i) fine[i] += std::norm(f[i]);
        const auto c = dirichlet_grid(p, t, -static_cast<double>(jt) * dh, dh, coarse.size());
        for (std::size_t i = 0; i < coarse.size(); ++i) coarse[i] += std::norm(c[i]);
    }
    for (std::size_t i = 0; i < nf; ++i)
        if (-2.0 + static_cast<double>(i) * fdh <= 2.0) r.lhs = std::max(r.lhs, fine[i]);
    for (long j = -jt; j <= jt; ++j) {
        const double v = coarse[static_cast<std::size_t>(j + jt)];
        if (std::labs(j) <= jc)
            r.rhs_core += v;
        else
            r.rhs_tail += v / (1.0 + std::pow(static_cast<double>(std::labs(j)), A));
    }
    r.ratio = r.lhs / (r.rhs_core + r.rhs_tail);
    return r;
}

void write_bump_csv(std::ostream& os, const BandlimitedBump& g, const TruncatedExpansion& d,
                    const std::vector<double>& xs) {
    CsvWriter w(os);
    w.header({"x", "G", "D_real", "D_imag"});
    for (double x : xs) {
        const cplx v = d.value(x);
        w.row(x, g.value(x), v.real(), v.imag());
    }
}

}  // namespace zlab
