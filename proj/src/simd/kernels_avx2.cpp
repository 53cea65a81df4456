#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <vector>

#include "zlab/simd.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>
#define ZLAB_AVX2 __attribute__((target("avx2,fma")))
#define ZLAB_HAVE_X86 1
#endif

namespace zlab::simd {

#ifdef ZLAB_HAVE_X86
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Taylor coefficients of cos and sin in theta^2; |theta| <= pi/2 keeps the
// truncation below 2e-17.
constexpr double kCos[11] = {
    1.0, -1.0 / 2, 1.0 / 24, -1.0 / 720, 1.0 / 40320, -1.0 / 3628800, 1.0 / 479001600,
    -1.0 / 87178291200.0, 1.0 / 20922789888000.0, -1.0 / 6402373705728000.0,
    1.0 / 2432902008176640000.0};
constexpr double kSin[11] = {
    1.0, -1.0 / 6, 1.0 / 120, -1.0 / 5040, 1.0 / 362880, -1.0 / 39916800, 1.0 / 6227020800.0,
    -1.0 / 1307674368000.0, 1.0 / 355687428096000.0, -1.0 / 121645100408832000.0,
    1.0 / 51090942171709440000.0};

ZLAB_AVX2 inline __m256d horner(const double* c, __m256d w) {
    __m256d p = _mm256_set1_pd(c[10]);
    for (int k = 9; k >= 0; --k) p = _mm256_fmadd_pd(p, w, _mm256_set1_pd(c[k]));
    return p;
}

ZLAB_AVX2 inline __m256d vabs(__m256d x) {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
}

// Reduce x (turns) to q in [0, 1/4] with cos(2 pi x) = +-cos(2 pi q).
ZLAB_AVX2 inline __m256d cos2pi(__m256d x) {
    const __m256d r = _mm256_sub_pd(x, _mm256_round_pd(x, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC));
    const __m256d a = vabs(r);
    const __m256d big = _mm256_cmp_pd(a, _mm256_set1_pd(0.25), _CMP_GT_OQ);
    const __m256d q = _mm256_blendv_pd(a, _mm256_sub_pd(_mm256_set1_pd(0.5), a), big);
    const __m256d th = _mm256_mul_pd(q, _mm256_set1_pd(kTwoPi));
    const __m256d c = horner(kCos, _mm256_mul_pd(th, th));
    return _mm256_xor_pd(c, _mm256_and_pd(big, _mm256_set1_pd(-0.0)));
}

ZLAB_AVX2 inline __m256d sin2pi(__m256d x) {
    const __m256d r = _mm256_sub_pd(x, _mm256_round_pd(x, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC));
    const __m256d a = vabs(r);
    const __m256d big = _mm256_cmp_pd(a, _mm256_set1_pd(0.25), _CMP_GT_OQ);
    const __m256d q = _mm256_blendv_pd(a, _mm256_sub_pd(_mm256_set1_pd(0.5), a), big);
    const __m256d th = _mm256_mul_pd(q, _mm256_set1_pd(kTwoPi));
    const __m256d s = _mm256_mul_pd(th, horner(kSin, _mm256_mul_pd(th, th)));
    return _mm256_xor_pd(s, _mm256_and_pd(r, _mm256_set1_pd(-0.0)));
}

// Natural log for positive normal doubles: x = 2^e m, m in [sqrt(1/2), sqrt 2),
// log m = 2 atanh((m-1)/(m+1)) by its odd series.
ZLAB_AVX2 inline __m256d vlog(__m256d x) {
    const __m256i bits = _mm256_castpd_si256(x);
    const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFll);
    const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000ll);
    __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));
    // biased exponent as double via the 2^52 trick
    const __m256i eb = _mm256_srli_epi64(bits, 52);
    const __m256d magic = _mm256_set1_pd(0x1.0p52);
    __m256d e = _mm256_sub_pd(_mm256_castsi256_pd(_mm256_or_si256(eb, _mm256_castpd_si256(magic))), magic);
    e = _mm256_sub_pd(e, _mm256_set1_pd(1023.0));
    const __m256d hi = _mm256_cmp_pd(m, _mm256_set1_pd(std::numbers::sqrt2), _CMP_GT_OQ);
    m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), hi);
    e = _mm256_add_pd(e, _mm256_and_pd(hi, _mm256_set1_pd(1.0)));
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d s = _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
    const __m256d s2 = _mm256_mul_pd(s, s);
    __m256d p = _mm256_set1_pd(1.0 / 21);
    for (int k = 9; k >= 0; --k) p = _mm256_fmadd_pd(p, s2, _mm256_set1_pd(1.0 / (2 * k + 1)));
    const __m256d logm = _mm256_mul_pd(_mm256_mul_pd(_mm256_set1_pd(2.0), s), p);
    const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
    const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
    return _mm256_add_pd(_mm256_mul_pd(e, ln2_hi), _mm256_fmadd_pd(e, ln2_lo, logm));
}

struct X4 {
    __m256i s0, s1, s2, s3;
};

ZLAB_AVX2 inline __m256i rotl(__m256i x, int k) {
    return _mm256_or_si256(_mm256_slli_epi64(x, k), _mm256_srli_epi64(x, 64 - k));
}

ZLAB_AVX2 inline __m256i next(X4& g) {
    const __m256i r = _mm256_add_epi64(rotl(_mm256_add_epi64(g.s0, g.s3), 23), g.s0);
    const __m256i t = _mm256_slli_epi64(g.s1, 17);
    g.s2 = _mm256_xor_si256(g.s2, g.s0);
    g.s3 = _mm256_xor_si256(g.s3, g.s1);
    g.s1 = _mm256_xor_si256(g.s1, g.s2);
    g.s0 = _mm256_xor_si256(g.s0, g.s3);
    g.s2 = _mm256_xor_si256(g.s2, t);
    g.s3 = rotl(g.s3, 45);
    return r;
}

ZLAB_AVX2 inline __m256d uniform(__m256i r) {
    const __m256i m = _mm256_or_si256(_mm256_srli_epi64(r, 12), _mm256_set1_epi64x(0x3FF0000000000000ll));
    return _mm256_sub_pd(_mm256_castsi256_pd(m), _mm256_set1_pd(1.0));
}

ZLAB_AVX2 X4 load4(const Xoshiro256pp* g) {
    const auto& a = g[0].state();
    const auto& b = g[1].state();
    const auto& c = g[2].state();
    const auto& d = g[3].state();
    X4 x;
    __m256i* dst[4] = {&x.s0, &x.s1, &x.s2, &x.s3};
    for (int k = 0; k < 4; ++k)
        *dst[k] = _mm256_setr_epi64x(static_cast<long long>(a[k]), static_cast<long long>(b[k]),
                                     static_cast<long long>(c[k]), static_cast<long long>(d[k]));
    return x;
}

ZLAB_AVX2 void store4(const X4& x, Xoshiro256pp* g) {
    alignas(32) std::uint64_t w[4][4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(w[0]), x.s0);
    _mm256_store_si256(reinterpret_cast<__m256i*>(w[1]), x.s1);
    _mm256_store_si256(reinterpret_cast<__m256i*>(w[2]), x.s2);
    _mm256_store_si256(reinterpret_cast<__m256i*>(w[3]), x.s3);
    for (int l = 0; l < 4; ++l) g[l].set_state({w[0][l], w[1][l], w[2][l], w[3][l]});
}

ZLAB_AVX2 void rotate_accumulate(const RotateArgs& a) {
    std::vector<double> acc_re(4 * kTile), acc_im(4 * kTile);
    for (std::size_t t0 = a.j_begin; t0 < a.j_end; t0 += kTile) {
        const std::size_t len = std::min(kTile, a.j_end - t0);
        std::fill_n(acc_re.begin(), 4 * len, 0.0);
        std::fill_n(acc_im.begin(), 4 * len, 0.0);
        const double h = a.h0 + static_cast<double>(t0) * a.dh;
        for (std::size_t i0 = 0; i0 < a.nprimes; i0 += 4) {
            alignas(32) double zr[4], zi[4], rr[4], ri[4], ar[4], ai[4], br[4], bi[4];
            for (int l = 0; l < 4; ++l) {
                const std::size_t i = i0 + static_cast<std::size_t>(l);
                if (i < a.nprimes) {
                    zr[l] = std::cos(h * a.logp[i]);
                    zi[l] = -std::sin(h * a.logp[i]);
                    rr[l] = std::cos(a.dh * a.logp[i]);
                    ri[l] = -std::sin(a.dh * a.logp[i]);
                    ar[l] = a.c1re[i];
                    ai[l] = a.c1im[i];
                    br[l] = a.c2re ? a.c2re[i] : 0.0;
                    bi[l] = a.c2im ? a.c2im[i] : 0.0;
                } else {
                    zr[l] = 1.0;
                    zi[l] = rr[l] = ri[l] = ar[l] = ai[l] = br[l] = bi[l] = 0.0;
                    rr[l] = 1.0;
                }
            }
            __m256d vzr = _mm256_load_pd(zr), vzi = _mm256_load_pd(zi);
            const __m256d vrr = _mm256_load_pd(rr), vri = _mm256_load_pd(ri);
            const __m256d var = _mm256_load_pd(ar), vai = _mm256_load_pd(ai);
            const __m256d vbr = _mm256_load_pd(br), vbi = _mm256_load_pd(bi);
            const __m256d two = _mm256_set1_pd(2.0);
            for (std::size_t j = 0; j < len; ++j) {
                const __m256d z2r = _mm256_sub_pd(_mm256_mul_pd(vzr, vzr), _mm256_mul_pd(vzi, vzi));
                const __m256d z2i = _mm256_mul_pd(two, _mm256_mul_pd(vzr, vzi));
                const __m256d tr = _mm256_add_pd(_mm256_sub_pd(_mm256_mul_pd(var, vzr), _mm256_mul_pd(vai, vzi)),
                                                 _mm256_sub_pd(_mm256_mul_pd(vbr, z2r), _mm256_mul_pd(vbi, z2i)));
                const __m256d ti = _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(var, vzi), _mm256_mul_pd(vai, vzr)),
                                                 _mm256_add_pd(_mm256_mul_pd(vbr, z2i), _mm256_mul_pd(vbi, z2r)));
                double* pr = acc_re.data() + 4 * j;
                double* pi = acc_im.data() + 4 * j;
                _mm256_storeu_pd(pr, _mm256_add_pd(_mm256_loadu_pd(pr), tr));
                _mm256_storeu_pd(pi, _mm256_add_pd(_mm256_loadu_pd(pi), ti));
                const __m256d nr = _mm256_sub_pd(_mm256_mul_pd(vzr, vrr), _mm256_mul_pd(vzi, vri));
                vzi = _mm256_add_pd(_mm256_mul_pd(vzr, vri), _mm256_mul_pd(vzi, vrr));
                vzr = nr;
            }
        }
        for (std::size_t j = 0; j < len; ++j) {
            const double* pr = acc_re.data() + 4 * j;
            const double* pi = acc_im.data() + 4 * j;
            a.out_re[t0 - a.j_begin + j] += (pr[0] + pr[1]) + (pr[2] + pr[3]);
            a.out_im[t0 - a.j_begin + j] += (pi[0] + pi[1]) + (pi[2] + pi[3]);
        }
    }
}

ZLAB_AVX2 void euler_paths(const EulerPathArgs& a, Xoshiro256pp* streams, std::size_t npaths, double* out) {
    for (std::size_t q0 = 0; q0 < npaths; q0 += 4) {
        const std::size_t nl = std::min<std::size_t>(4, npaths - q0);
        Xoshiro256pp lanes[4];
        for (std::size_t l = 0; l < 4; ++l) lanes[l] = streams[q0 + std::min(l, nl - 1)];
        X4 g = load4(lanes);
        __m256d s = _mm256_setzero_pd();
        const __m256d half = _mm256_set1_pd(0.5), two = _mm256_set1_pd(2.0), one = _mm256_set1_pd(1.0);
        alignas(32) double tmp[4];
        std::size_t i = 0;
        for (std::size_t m = 0; m < a.nmarks; ++m) {
            for (; i < a.marks[m]; ++i) {
                __m256d x = uniform(next(g));
                if (a.phase) x = _mm256_sub_pd(x, _mm256_set1_pd(a.phase[i]));
                const __m256d c = cos2pi(x);
                const __m256d quad = _mm256_sub_pd(_mm256_mul_pd(two, _mm256_mul_pd(c, c)), one);
                const __m256d xp = _mm256_add_pd(_mm256_mul_pd(_mm256_set1_pd(a.a[i]), c),
                                                 _mm256_mul_pd(_mm256_mul_pd(half, _mm256_set1_pd(a.b[i])), quad));
                s = _mm256_add_pd(s, xp);
            }
            _mm256_store_pd(tmp, s);
            for (std::size_t l = 0; l < nl; ++l) out[(q0 + l) * a.nmarks + m] = tmp[l];
        }
        store4(g, lanes);
        for (std::size_t l = 0; l < nl; ++l) streams[q0 + l] = lanes[l];
    }
}

ZLAB_AVX2 void gaussian_fill(Xoshiro256pp* lanes, double* out, std::size_t n) {
    X4 g = load4(lanes);
    const __m256d one = _mm256_set1_pd(1.0), m2 = _mm256_set1_pd(-2.0);
    for (std::size_t k = 0; k + 8 <= n; k += 8) {
        const __m256d u1 = _mm256_sub_pd(one, uniform(next(g)));
        const __m256d u2 = uniform(next(g));
        const __m256d r = _mm256_sqrt_pd(_mm256_mul_pd(m2, vlog(u1)));
        _mm256_storeu_pd(out + k, _mm256_mul_pd(r, cos2pi(u2)));
        _mm256_storeu_pd(out + k + 4, _mm256_mul_pd(r, sin2pi(u2)));
    }
    store4(g, lanes);
}

ZLAB_AVX2 void correlate(const double* v, const double* ker, std::size_t nker, double* out, std::size_t nout) {
    std::size_t i = 0;
    for (; i + 16 <= nout; i += 16) {
        __m256d s0 = _mm256_setzero_pd(), s1 = s0, s2 = s0, s3 = s0;
        for (std::size_t t = 0; t < nker; ++t) {
            const __m256d k = _mm256_broadcast_sd(ker + t);
            const double* p = v + i + t;
            s0 = _mm256_fmadd_pd(k, _mm256_loadu_pd(p), s0);
            s1 = _mm256_fmadd_pd(k, _mm256_loadu_pd(p + 4), s1);
            s2 = _mm256_fmadd_pd(k, _mm256_loadu_pd(p + 8), s2);
            s3 = _mm256_fmadd_pd(k, _mm256_loadu_pd(p + 12), s3);
        }
        _mm256_storeu_pd(out + i, s0);
        _mm256_storeu_pd(out + i + 4, s1);
        _mm256_storeu_pd(out + i + 8, s2);
        _mm256_storeu_pd(out + i + 12, s3);
    }
    for (; i + 4 <= nout; i += 4) {
        __m256d s = _mm256_setzero_pd();
        for (std::size_t t = 0; t < nker; ++t)
            s = _mm256_fmadd_pd(_mm256_broadcast_sd(ker + t), _mm256_loadu_pd(v + i + t), s);
        _mm256_storeu_pd(out + i, s);
    }
    for (; i < nout; ++i) {
        double s = 0.0;
        for (std::size_t t = 0; t < nker; ++t) s += ker[t] * v[i + t];
        out[i] = s;
    }
}

template <__m256d (*F)(__m256d)>
ZLAB_AVX2 void map4(const double* x, double* out, std::size_t n, double pad) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, F(_mm256_loadu_pd(x + i)));
    if (i < n) {
        alignas(32) double t[4] = {pad, pad, pad, pad};
        std::memcpy(t, x + i, (n - i) * sizeof(double));
        _mm256_store_pd(t, F(_mm256_load_pd(t)));
        std::memcpy(out + i, t, (n - i) * sizeof(double));
    }
}

ZLAB_AVX2 __m256d cos2pi_f(__m256d x) { return cos2pi(x); }
ZLAB_AVX2 __m256d log_f(__m256d x) { return vlog(x); }

void map_cos2pi(const double* x, double* out, std::size_t n) { map4<cos2pi_f>(x, out, n, 0.0); }
void map_log(const double* x, double* out, std::size_t n) { map4<log_f>(x, out, n, 1.0); }

}  // namespace

namespace detail {
const Kernels avx2_kernels{rotate_accumulate, euler_paths, gaussian_fill, correlate, map_cos2pi, map_log};
}

#else

namespace detail {
const Kernels avx2_kernels = scalar_kernels;
}

#endif

}  // namespace zlab::simd
