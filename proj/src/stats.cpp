#include "zlab/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

#include "zlab/rng.hpp"

namespace zlab {

Estimate mean_ci(std::span<const double> xs) {
    Estimate e;
    e.n = xs.size();
    if (xs.empty()) return e;
    CompensatedSum s;
    for (double x : xs) s.add(x);
    const double m = s.value() / static_cast<double>(xs.size());
    e.value = m;
    if (xs.size() < 2) return e;
    CompensatedSum v;
    for (double x : xs) v.add((x - m) * (x - m));
    const double var = v.value() / static_cast<double>(xs.size() - 1);
    e.stderr_ = std::sqrt(var / static_cast<double>(xs.size()));
    e.lo = m - 1.96 * e.stderr_;
    e.hi = m + 1.96 * e.stderr_;
    e.ci_defined = true;
    return e;
}

Estimate bootstrap_mean_ci(std::span<const double> xs, std::uint64_t seed, int resamples) {
    Estimate e = mean_ci(xs);
    if (xs.size() < 2) {
        e.ci_defined = false;
        return e;
    }
    auto rng = seed_stream(seed, 0xB007);
    std::vector<double> means(static_cast<std::size_t>(resamples));
    const std::uint64_t n = xs.size();
    for (auto& m : means) {
        CompensatedSum s;
        for (std::uint64_t i = 0; i < n; ++i) s.add(xs[rng() % n]);
        m = s.value() / static_cast<double>(n);
    }
    std::sort(means.begin(), means.end());
    const auto at = [&](double q) {
        const auto i = static_cast<std::size_t>(q * static_cast<double>(means.size() - 1));
        return means[i];
    };
    e.lo = at(0.025);
    e.hi = at(0.975);
    e.ci_defined = true;
    return e;
}

Estimate binomial_ci(std::uint64_t hits, std::uint64_t n) {
    Estimate e;
    e.n = n;
    if (n == 0) return e;
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(hits) / nn;
    const double z = 1.96;
    const double den = 1.0 + z * z / nn;
    const double c = (p + z * z / (2 * nn)) / den;
    const double h = z * std::sqrt(p * (1 - p) / nn + z * z / (4 * nn * nn)) / den;
    e.value = p;
    e.lo = c - h;
    e.hi = c + h;
    e.stderr_ = std::sqrt(p * (1 - p) / nn);
    e.ci_defined = true;
    return e;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double chi2_sf(double x, double dof) {
    if (x <= 0) return 1.0;
    return boost::math::gamma_q(dof / 2.0, x / 2.0);
}

double median(std::vector<double> xs) {
    if (xs.empty()) return std::nan("");
    const std::size_t m = xs.size() / 2;
    std::nth_element(xs.begin(), xs.begin() + m, xs.end());
    const double hi = xs[m];
    if (xs.size() % 2) return hi;
    const double lo = *std::max_element(xs.begin(), xs.begin() + m);
    return 0.5 * (lo + hi);
}

LineFit fit_line(std::span<const double> x, std::span<const double> y, std::span<const double> w) {
    LineFit f;
    f.points = x.size();
    double sw = 0, sx = 0, sy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double wi = w.empty() ? 1.0 : w[i];
        sw += wi;
        sx += wi * x[i];
        sy += wi * y[i];
    }
    const double mx = sx / sw, my = sy / sw;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double wi = w.empty() ? 1.0 : w[i];
        sxx += wi * (x[i] - mx) * (x[i] - mx);
        sxy += wi * (x[i] - mx) * (y[i] - my);
    }
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    return f;
}

}  // namespace zlab
