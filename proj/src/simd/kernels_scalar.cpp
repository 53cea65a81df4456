#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "zlab/simd.hpp"

namespace zlab::simd {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void rotate_accumulate(const RotateArgs& a) {
    std::vector<double> acc_re(kTile), acc_im(kTile);
    for (std::size_t t0 = a.j_begin; t0 < a.j_end; t0 += kTile) {
        const std::size_t len = std::min(kTile, a.j_end - t0);
        std::fill_n(acc_re.begin(), len, 0.0);
        std::fill_n(acc_im.begin(), len, 0.0);
        const double h = a.h0 + static_cast<double>(t0) * a.dh;
        for (std::size_t i = 0; i < a.nprimes; ++i) {
            double zr = std::cos(h * a.logp[i]), zi = -std::sin(h * a.logp[i]);
            const double rr = std::cos(a.dh * a.logp[i]), ri = -std::sin(a.dh * a.logp[i]);
            const double ar = a.c1re[i], ai = a.c1im[i];
            const double br = a.c2re ? a.c2re[i] : 0.0, bi = a.c2im ? a.c2im[i] : 0.0;
            for (std::size_t j = 0; j < len; ++j) {
                const double z2r = zr * zr - zi * zi, z2i = 2.0 * zr * zi;
                acc_re[j] += (ar * zr - ai * zi) + (br * z2r - bi * z2i);
                acc_im[j] += (ar * zi + ai * zr) + (br * z2i + bi * z2r);
                const double nr = zr * rr - zi * ri;
                zi = zr * ri + zi * rr;
                zr = nr;
            }
        }
        for (std::size_t j = 0; j < len; ++j) {
            a.out_re[t0 - a.j_begin + j] += acc_re[j];
            a.out_im[t0 - a.j_begin + j] += acc_im[j];
        }
    }
}

void euler_paths(const EulerPathArgs& a, Xoshiro256pp* streams, std::size_t npaths, double* out) {
    for (std::size_t q = 0; q < npaths; ++q) {
        auto& g = streams[q];
        double s = 0.0;
        std::size_t m = 0, i = 0;
        for (; m < a.nmarks; ++m) {
            for (; i < a.marks[m]; ++i) {
                const double u = uniform52(g());
                const double x = a.phase ? u - a.phase[i] : u;
                const double c = std::cos(kTwoPi * x);
                s += a.a[i] * c + 0.5 * a.b[i] * (2.0 * c * c - 1.0);
            }
            out[q * a.nmarks + m] = s;
        }
    }
}

void gaussian_fill(Xoshiro256pp* lanes, double* out, std::size_t n) {
    for (std::size_t g = 0; g + 8 <= n; g += 8) {
        for (int l = 0; l < 4; ++l) {
            const double u1 = 1.0 - uniform52(lanes[l]());
            const double u2 = uniform52(lanes[l]());
            const double r = std::sqrt(-2.0 * std::log(u1));
            out[g + l] = r * std::cos(kTwoPi * u2);
            out[g + 4 + l] = r * std::sin(kTwoPi * u2);
        }
    }
}

void correlate(const double* v, const double* ker, std::size_t nker, double* out, std::size_t nout) {
    for (std::size_t i = 0; i < nout; ++i) {
        double s = 0.0;
        for (std::size_t t = 0; t < nker; ++t) s += ker[t] * v[i + t];
        out[i] = s;
    }
}

void map_cos2pi(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::cos(kTwoPi * (x[i] - std::nearbyint(x[i])));
}

void map_log(const double* x, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::log(x[i]);
}

}  // namespace

namespace detail {
const Kernels scalar_kernels{rotate_accumulate, euler_paths, gaussian_fill, correlate, map_cos2pi, map_log};
}

}  // namespace zlab::simd
