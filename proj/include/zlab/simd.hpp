#pragma once

// Scalar reference kernels and their AVX2 variants. The active table is
// chosen once at startup from CPUID; LAB_ISA=scalar|avx2 overrides it.
// Every AVX2 kernel has an equivalence test against the scalar one.

#include <cstddef>
#include <cstdint>

#include "zlab/rng.hpp"

namespace zlab::simd {

enum class Isa { scalar, avx2 };

// Shift tile length; the rotation kernel re-anchors its phases at every
// tile start, which also bounds the unit-modulus drift.
inline constexpr std::size_t kTile = 1024;

// out[j] += sum_i c1[i] z_ij + c2[i] z_ij^2 with z_ij = exp(-i h_j logp[i]),
// h_j = h0 + j*dh, for j in [j_begin, j_end). out is indexed from j_begin.
struct RotateArgs {
    const double* logp = nullptr;
    const double* c1re = nullptr;
    const double* c1im = nullptr;
    const double* c2re = nullptr;  // may be null: no quadratic term
    const double* c2im = nullptr;
    std::size_t nprimes = 0;
    double h0 = 0.0;
    double dh = 0.0;
    std::size_t j_begin = 0;
    std::size_t j_end = 0;
    double* out_re = nullptr;
    double* out_im = nullptr;
};

// Random Euler product paths. Path q draws u_i (52-bit uniform) for every
// prime in order and accumulates X_i = a[i] c + b[i] (2c^2 - 1) / 2 with
// c = cos(2 pi (u_i - phase[i])). After marks[m] primes the running sum is
// written to out[q * nmarks + m]. Streams are advanced in place.
struct EulerPathArgs {
    const double* a = nullptr;
    const double* b = nullptr;
    const double* phase = nullptr;  // turns; null means zero shift
    std::size_t nprimes = 0;
    const std::size_t* marks = nullptr;
    std::size_t nmarks = 0;
};

struct Kernels {
    void (*rotate_accumulate)(const RotateArgs&);
    void (*euler_paths)(const EulerPathArgs&, Xoshiro256pp* streams, std::size_t npaths, double* out);
    // Standard normals from four interleaved streams; n must be a multiple
    // of 8. Group g: lane l draws (u1, u2) and writes r cos to out[8g + l],
    // r sin to out[8g + 4 + l].
    void (*gaussian_fill)(Xoshiro256pp* lanes4, double* out, std::size_t n);
    // out[i] = sum_{t < nker} ker[t] * v[i + t], i < nout.
    void (*correlate)(const double* v, const double* ker, std::size_t nker, double* out, std::size_t nout);
    // Elementwise helpers, exposed for testing the vector math.
    void (*map_cos2pi)(const double* x, double* out, std::size_t n);
    void (*map_log)(const double* x, double* out, std::size_t n);
};

bool isa_available(Isa isa);
Isa active_isa();
void set_active_isa(Isa isa);  // throws if unavailable
const char* isa_name(Isa isa);

const Kernels& kernels();
const Kernels& kernels(Isa isa);

// 52-bit uniform on [0,1) used by all kernels: exact (r >> 12) * 2^-52.
inline double uniform52(std::uint64_t r) {
    return static_cast<double>(r >> 12) * 0x1.0p-52;
}

namespace detail {
extern const Kernels scalar_kernels;
extern const Kernels avx2_kernels;
}  // namespace detail

}  // namespace zlab::simd
