#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace zlab {

// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            c_ += (sum_ - t) + x;
        else
            c_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + c_; }

private:
    double sum_ = 0.0;
    double c_ = 0.0;
};

struct Estimate {
    double value = 0.0;
    double lo = 0.0;  // lower CI end
    double hi = 0.0;  // upper CI end
    double stderr_ = 0.0;
    std::size_t n = 0;
    bool ci_defined = false;
};

// Sample mean with a normal-approximation 95% CI.
Estimate mean_ci(std::span<const double> xs);
// Percentile bootstrap 95% CI for the mean. Deterministic given seed.
Estimate bootstrap_mean_ci(std::span<const double> xs, std::uint64_t seed, int resamples = 1000);
// Binomial proportion with the Wilson 95% interval; stderr_ is sqrt(p(1-p)/n).
Estimate binomial_ci(std::uint64_t hits, std::uint64_t n);

double normal_cdf(double x);
// Upper tail P(chi2_dof >= x).
double chi2_sf(double x, double dof);

double median(std::vector<double> xs);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::size_t points = 0;
};
// Least squares y ~ a + b x; weights empty means ordinary least squares.
LineFit fit_line(std::span<const double> x, std::span<const double> y,
                 std::span<const double> w = {});

}  // namespace zlab
