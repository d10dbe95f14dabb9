#pragma once

#include <cstddef>
#include <vector>

#include "casimir/stack.hpp"

namespace casimir::kernels {

// A stack "compiled" for batch evaluation: plate kinds and couplings as flat
// arrays, gaps precomputed. split == -1 means the full-stack parameter
// Delta_{1...N}; split == s in [1, n-1] means the two-body interaction factor
// 1 - R^<_{1..s} u^2 R^>_{s+1..n} across gap[s-1].
struct StackPlan {
    enum Kind : int { MD = 0, PerfectE = 1, PerfectM = 2 };

    int n = 0;
    int split = -1;
    bool kappa_only = false;
    double min_gap = 0.0;
    std::vector<int> kind;
    std::vector<double> lambda_e;
    std::vector<double> lambda_g;
    std::vector<double> gap; // n-1 entries

    // Throws ValidationError for stacks with dispersion hooks (those take the
    // generic scalar path in the quadrature layer instead).
    static StackPlan compile(const Stack& stack);

    // Two disjoint bodies across a junction gap; positions inside each body
    // only matter through their gaps.
    static StackPlan compile_interaction(const Stack& left, const Stack& right,
                                         double junction_gap);
};

// out[p] = sum over modes H,E of the log factors at (kappa[p], zeta[p]):
// the full log Delta_{1...N} for split == -1, or the single junction term
// log(1 - R^< u^2 R^>) for a split plan.
using LogDeltaFn = void (*)(const StackPlan&, const double* kappa,
                            const double* zeta, double* out, std::size_t count);

// Reference kernel; always available, uses libm exp/log.
void log_delta_scalar(const StackPlan& plan, const double* kappa,
                      const double* zeta, double* out, std::size_t count);

#if defined(CASIMIR_HAVE_AVX2)
// AVX2+FMA variant, 4 points per lane pass; tail points fall back to the
// scalar reference. Call only when avx2_supported() is true.
void log_delta_avx2(const StackPlan& plan, const double* kappa,
                    const double* zeta, double* out, std::size_t count);
#endif

#if defined(CASIMIR_HAVE_AVX2)
namespace detail {
// Raw vector math entry points, exposed so the equivalence tests can pin
// them against libm directly.
void exp4(const double in[4], double out[4]);
void log4(const double in[4], double out[4]);
} // namespace detail
#endif

bool avx2_compiled();
bool avx2_supported(); // compiled in and present on this CPU

// Best kernel for this machine, honoring CASIMIR_KERNEL=scalar|avx2|auto.
LogDeltaFn active_kernel();
const char* active_kernel_name();

// Test hook: nullptr or "auto" restores runtime selection.
void force_kernel(const char* name);

} // namespace casimir::kernels
