#include <cstdlib>
#include <cstring>

#include "zlab/errors.hpp"
#include "zlab/simd.hpp"

namespace zlab::simd {

namespace {

Isa detect() {
    if (const char* env = std::getenv("LAB_ISA")) {
        if (std::strcmp(env, "scalar") == 0) return Isa::scalar;
        if (std::strcmp(env, "avx2") == 0 && isa_available(Isa::avx2)) return Isa::avx2;
    }
    return isa_available(Isa::avx2) ? Isa::avx2 : Isa::scalar;
}

Isa& current() {
    static Isa isa = detect();
    return isa;
}

}  // namespace

bool isa_available(Isa isa) {
    if (isa == Isa::scalar) return true;
#if defined(__x86_64__) || defined(__i386__)
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

Isa active_isa() { return current(); }

void set_active_isa(Isa isa) {
    if (!isa_available(isa)) throw CapacityError("simd", std::string("ISA not available: ") + isa_name(isa));
    current() = isa;
}

const char* isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

const Kernels& kernels(Isa isa) {
    return isa == Isa::avx2 ? detail::avx2_kernels : detail::scalar_kernels;
}

const Kernels& kernels() { return kernels(current()); }

}  // namespace zlab::simd
