#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "zlab/numeric.hpp"
#include "zlab/stats.hpp"

namespace zlab {

enum class ZetaMethod { riemann_siegel, euler_maclaurin, smoothed_dirichlet };
const char* method_name(ZetaMethod m);

struct ZetaSample {
    double t = 0;
    cplx value;
    ZetaMethod method = ZetaMethod::riemann_siegel;
    // |value - other| / |other| against the second method, NaN when not computed
    double cross_check = NAN;
};

// Riemann-Siegel theta by the Stirling series.
long double rs_theta(long double t);
// Hardy Z(t) by Riemann-Siegel with corrections C_0..C_4; t >= 1.
double hardy_z(double t);
cplx zeta_rs(double t);
// Euler-Maclaurin for any s != 1. n_terms = 0 picks the cutoff from |Im s|.
cplx zeta_em(cplx s, int n_terms = 0);

inline constexpr double kRsMinT = 50.0;
inline constexpr double kMaxT = 1e12;

// zeta(1/2 + it), Riemann-Siegel for t >= 50, Euler-Maclaurin below.
cplx zeta_critical(double t);
ZetaSample zeta_sample(double t, bool cross_check = false);

// sum_{n <= T} n^{-1/2-it} (1 - log n / log T)^100
// Summation stops once the remaining terms are bounded by 1e-18 in total.
cplx smoothed_dirichlet(double t, double T);

struct GridMax {
    std::size_t index = 0;
    double h_star = 0;
    double max_abs = 0;
};
GridMax max_on_grid(double t, const std::vector<double>& hs);
// Spacing 2 pi / (8 log T) over [-half_width, half_width], symmetric about 0.
std::vector<double> discretization_grid(double T, double half_width = 1.0, int refine = 1);

// Shifts h in hs with |zeta(1/2 + i(t + h))| > e^y e^n n^{-3/4}, n = log log T.
std::vector<double> high_points(double t, const std::vector<double>& hs, double y, double T);

// Mean of |zeta(1/2 + i tau)|^p, tau uniform in [T, 2T] from seed_stream(seed, i).
Estimate moment_estimate(std::uint64_t seed, double T, int p, std::size_t M, unsigned workers = 1);

// Area mean of |zeta|^4 over the disc of radius r about 1/2 + i t.
double disc_mean_fourth(double t, double r, int radial = 16, int angular = 64);

struct SubharmonicRow {
    double t = 0;
    double center = 0;  // |zeta(1/2 + it)|^4
    double disc = 0;
    bool ok = false;    // center <= factor * disc
};
std::vector<SubharmonicRow> subharmonic_check(std::uint64_t seed, double T, std::size_t samples,
                                              double factor = 1.05, unsigned workers = 1);

struct ZetaGridReport {
    std::vector<double> ratios;  // fine max / coarse max per sampled tau
    double C = 0;                // 99th percentile of the ratios
    double max_ratio = 0;
};
ZetaGridReport discretization_check(std::uint64_t seed, double T, std::size_t samples, int refine = 8,
                                          unsigned workers = 1);

struct TailRow {
    double tau = 0;
    double h_star = 0;
    double max_abs = 0;
    double y = 0;  // log(max_abs) - n + (3/4) log n
};
// Grid maxima over |h| <= 1 for tau uniform in [T, 2T].
std::vector<TailRow> zeta_tail_samples(std::uint64_t seed, double T, std::size_t samples, unsigned workers = 1);
void write_tail_csv(std::ostream& os, const std::vector<TailRow>& rows);

}  // namespace zlab
