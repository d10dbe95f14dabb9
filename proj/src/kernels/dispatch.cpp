#include <cstdlib>
#include <cstring>
#include <string>

#include "casimir/kernels.hpp"

namespace casimir::kernels {

bool avx2_compiled() {
#if defined(CASIMIR_HAVE_AVX2)
    return true;
#else
    return false;
#endif
}

bool avx2_supported() {
#if defined(CASIMIR_HAVE_AVX2) && defined(__GNUC__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

std::string& override_slot() {
    static std::string slot;
    return slot;
}

const char* requested() {
    const std::string& forced = override_slot();
    if (!forced.empty()) return forced.c_str();
    const char* env = std::getenv("CASIMIR_KERNEL");
    return env ? env : "auto";
}

} // namespace

void force_kernel(const char* name) {
    override_slot() = (name == nullptr) ? "" : name;
}

LogDeltaFn active_kernel() {
    const char* want = requested();
    if (std::strcmp(want, "scalar") == 0) return &log_delta_scalar;
#if defined(CASIMIR_HAVE_AVX2)
    if (std::strcmp(want, "avx2") == 0 && avx2_supported()) return &log_delta_avx2;
    if (std::strcmp(want, "auto") == 0 && avx2_supported()) return &log_delta_avx2;
#endif
    return &log_delta_scalar;
}

const char* active_kernel_name() {
#if defined(CASIMIR_HAVE_AVX2)
    if (active_kernel() == &log_delta_avx2) return "avx2";
#endif
    return "scalar";
}

} // namespace casimir::kernels
