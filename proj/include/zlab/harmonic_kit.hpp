#pragma once

#include <functional>
#include <memory>
#include <ostream>
#include <vector>

#include "zlab/numeric.hpp"

namespace zlab {

// Fourier convention throughout: f^(xi) = \int f(x) e^{-2 pi i x xi} dx.

// Ingham-type F_0(x) = prod_{j<=K} sinc^2(2 pi a_j x), a_j ~ 1/(j log^2(j+2)),
// sum a_j = 1/2. F_0^ = B * B with B the convolution of the boxes
// 1[-a_j, a_j]/(2 a_j), so F_0^ >= 0 and supp F_0^ = [-1, 1].
class Ingham {
public:
    explicit Ingham(int K = 50);

    int K() const { return static_cast<int>(a_.size()); }
    const std::vector<double>& widths() const { return a_; }

    double F0(double x) const;
    // prod min(1, (2 pi a_j x)^-2), an upper bound for F0
    double envelope(double x) const;
    double l1() const { return l1_; }  // \int F0

    // Tabulated transform (8-point Lagrange on a 2^-13 grid); 0 for |xi| >= 1.
    double F0_hat(double xi) const;
    // Absolute accuracy of the table (rounding floor, read off past xi = 1).
    double hat_noise() const;
    // Direct quadrature of the cosine transform; valid for any xi.
    double F0_hat_quad(double xi) const;

    // \int_u^inf F0 / l1, i.e. the upper tail of the normalized F.
    double F_tail(double u) const;

    // Beyond this F0 < 1e-40 (relative to F0(0) = 1); integrals are cut here.
    double cutoff() const { return X_; }

private:
    double panel_integral(double lo, double hi) const;

    std::vector<double> a_;
    double X_ = 0;
    double w_ = 0.25;                    // panel width in x
    std::vector<double> tail_;           // \int_{k w}^inf F0
    std::vector<double> nodes_, wts_;    // composite Gauss-Legendre on [0, X]
    std::vector<double> f_at_nodes_;
    double hstep_ = 1.0 / 8192;
    std::vector<double> hat_;            // F0^ on [0, 1 + 16 h]
    double l1_ = 0;
};

// Shared default instance (K = 50).
const Ingham& default_ingham();

enum class SmoothingKind { ingham_F0, normalized_F, phi };

struct SmoothingFunction {
    SmoothingKind kind = SmoothingKind::phi;
    std::shared_ptr<const Ingham> ingham;  // null for phi
    double value(double x) const;
    double fourier(double xi) const;
};

SmoothingFunction make_ingham(int K = 50);
SmoothingFunction make_normalized_F(int K = 50);
SmoothingFunction make_phi();

// G_{Delta,A}(x) = \int_{lo}^{hi} S F(S (x - t)) dt, S = Delta^{2A},
// [lo, hi] = [-Delta^-A, Delta^-1 + Delta^-A] + shift. shift = -1/(2 Delta)
// gives the bump symmetric about 0.
class BandlimitedBump {
public:
    BandlimitedBump(double Delta, double A, double shift, const Ingham& F);

    double Delta() const { return Delta_; }
    double A() const { return A_; }
    double S() const { return S_; }
    double lo() const { return lo_; }
    double hi() const { return hi_; }
    const Ingham& F() const { return *F_; }

    // Substituted display: tail differences of F.
    double value(double x) const;
    // Adaptive Gauss-Kronrod on the display in t; ToleranceError if the error
    // estimate stays above tol.
    double value_adaptive(double x, double tol = 1e-12) const;
    cplx fourier(double xi) const;

    // \int |G^| and \int_{|xi| > S} |G^| by panel quadrature.
    double l1_fourier() const;
    double support_violation_mass() const;

private:
    double Delta_, A_, S_, lo_, hi_;
    const Ingham* F_;
};

BandlimitedBump make_bump(double Delta, double A, double shift = 0.0, const Ingham& F = default_ingham());

// D(x) = sum_{l <= L} c_l x^l, c_l = (2 pi i)^l / l! \int xi^l G^(xi) dxi.
struct TruncatedExpansion {
    double Delta = 0, A = 0;
    std::vector<cplx> c;
    std::vector<double> abs_moment;    // (2 pi)^l / l! \int |xi|^l |G^|
    std::vector<double> noise_moment;  // same with F^ replaced by its table error
    double l1_hat = 0;               // \int |G^|

    int L() const { return static_cast<int>(c.size()) - 1; }
    cplx value(double x) const;
    // log of sum_{l > L} (2 pi Delta^{2A} |x|)^l / l! * \int |G^|
    double log_tail_bound(double x) const;
    // quadrature allowance sum_l (tol abs_moment_l + noise_moment_l) |x|^l. High
    // moments weight xi near the band edge, where F^ is below its rounding
    // floor, so the noise term dominates there.
    double eval_error_bound(double x, double tol = 1e-12) const;
};

inline constexpr int kMaxExpansionOrder = 60;
TruncatedExpansion make_expansion(const BandlimitedBump& g, int L_max);

// Sandwich inequalities for G: constants measured on a dense grid (including
// the bin endpoints), then checked on independent samples.
struct SandwichReport {
    double C_lower = 0;  // 1(x in bin) <= G (1 + C e^{-Delta^{A-1}})
    double C_upper = 0;  // G <= 1(x in widened bin) + C e^{-Delta^{A-1}}
    std::size_t samples = 0;
    std::size_t holding = 0;
    double range_lo = 0, range_hi = 0;  // min/max of G on the grid
};
SandwichReport bump_sandwich_check(const BandlimitedBump& g, const std::vector<double>& xs, std::size_t grid = 10000);

// 1(Y in [u, u + 1/Delta]) <= |D(Y - u)|^2 (1 + C e^{-Delta^{A-1}}), for
// every u in Delta^{-1} Z with |Y - u| <= window.
struct IndicatorReport {
    std::size_t pairs = 0, in_bin = 0, holding = 0;
    double C_measured = 0;
    double min_abs2_in_bin = 0;
};
IndicatorReport indicator_sandwich_check(const BandlimitedBump& g, const TruncatedExpansion& d,
                                         const std::vector<double>& Y, double window, std::size_t grid = 2000);

// Tuples (u_{r+1}..u_k), u_j in Delta_j^{-1} Z, with
//   L(j) - 1 <= v + sum_{i<=j} u_i - m(j) <= U(j) + 1 for all j in (r, k]
//   |sum u_i + v - w| <= 1.
struct ChainSpec {
    int r = 0, k = 0;
    std::function<double(int)> Delta, L, U, m;
    double u_bound = 0;  // |u_j| cap for the enumeration
};
std::vector<std::vector<double>> enumerate_tuples(const ChainSpec& s, double v, double w);

// Poisson-summation reconstruction of D(1/2 + i t + i h0) from the lattice
// h in 2 pi Z / ((2 + eps) log N). V = 1[-eps/2, 1 + eps/2] * phi_eps with
// phi_eps built from F0^, so V = 1 on [0, 1] and supp V = [-eps, 1 + eps].
struct PoissonWindow {
    double eps = 1.0;
    double cut = 1e-14;  // drop lattice terms with |V^| below cut
    const Ingham* F = nullptr;
    cplx V_hat(double xi) const;
    double V(double x) const;  // by quadrature, for tests
    // |V^(xi)| < cut for |xi| > reach()
    double reach() const;
};

// coeffs[n-1] is a_n; D(s) = sum a_n n^{-s}, length N = coeffs.size().
cplx dirichlet_eval(const std::vector<cplx>& coeffs, double t);
cplx poisson_reconstruct(const std::vector<cplx>& coeffs, double t, double h0, const PoissonWindow& V);

struct DiscretizationReport {
    double lhs = 0;        // fine-grid max over |h| <= 2 of sum |D_i|^2
    double rhs_core = 0;   // |j| <= 16 log N
    double rhs_tail = 0;   // |j| > 16 log N with weight (1 + |j|^A)^-1
    double ratio = 0;      // lhs / (rhs_core + rhs_tail)
};
DiscretizationReport discretized_max_bound(const std::vector<std::vector<cplx>>& polys, double t, double A = 100,
                                           int fine_factor = 16);

void write_bump_csv(std::ostream& os, const BandlimitedBump& g, const TruncatedExpansion& d,
                    const std::vector<double>& xs);

}  // namespace zlab
