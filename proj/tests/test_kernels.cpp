#include <cmath>
#include <cstdlib>
#include <cstring>
#include <vector>

#include <doctest.h>

#include "casimir/kernels.hpp"
#include "casimir/scattering.hpp"
#include "helpers.hpp"

using namespace casimir;
using kernels::StackPlan;

namespace {

// Direct evaluation through the scattering module, the reference the kernels
// must reproduce.
double log_delta_reference(const Stack& stack, double kappa, double zeta) {
    const SpectralPoint sp = SpectralPoint::from_zeta_kappa(zeta, kappa);
    return std::log(composite(stack, Mode::H, sp).delta) +
           std::log(composite(stack, Mode::E, sp).delta);
}

double log_interaction_reference(const Stack& left, const Stack& right, double gap,
                                 double kappa, double zeta) {
    const SpectralPoint sp = SpectralPoint::from_zeta_kappa(zeta, kappa);
    const double u2 = std::exp(-2.0 * kappa * gap);
    double acc = 0.0;
    for (Mode mode : {Mode::H, Mode::E}) {
        acc += std::log(1.0 - composite(left, mode, sp).r_right * u2 *
                                  composite(right, mode, sp).r_left);
    }
    return acc;
}

std::vector<double> sample_kappas(std::mt19937_64& rng, std::size_t count) {
    std::uniform_real_distribution<double> expo(-6.0, 3.5);
    std::vector<double> ks(count);
    for (double& k : ks) k = std::exp(expo(rng)); // 2.5e-3 .. 33
    return ks;
}

} // namespace

TEST_CASE("plan compilation") {
    const Stack stack({Plate::perfect_e(0.0), Plate::magnetodielectric(1.0, 2.0, 0.5),
                       Plate::perfect_m(3.0)});
    const StackPlan plan = StackPlan::compile(stack);
    CHECK(plan.n == 3);
    CHECK(plan.split == -1);
    CHECK(plan.gap == std::vector<double>{1.0, 2.0});
    CHECK(plan.min_gap == 1.0);
    CHECK_FALSE(plan.kappa_only);

    const Stack ideal({Plate::perfect_e(0.0), Plate::magnetodielectric(1.0, 0.0, 0.0),
                       Plate::perfect_m(2.0)});
    CHECK(StackPlan::compile(ideal).kappa_only);

    Plate hooked = Plate::magnetodielectric(0.0, 1.0, 0.0);
    hooked.response = [](double) { return std::make_pair(1.0, 0.0); };
    CHECK_THROWS_AS(StackPlan::compile(Stack({hooked, Plate::perfect_e(1.0)})),
                    ValidationError);
}

TEST_CASE("scalar kernel matches the scattering reference") {
    std::mt19937_64 rng(2025);
    for (int it = 0; it < 40; ++it) {
        const int n = 2 + static_cast<int>(rng() % 7);
        const Stack stack = (it % 2 == 0) ? test::random_md_stack(rng, n)
                                          : test::random_mixed_stack(rng, n);
        const StackPlan plan = StackPlan::compile(stack);
        const std::vector<double> ks = sample_kappas(rng, 9);
        std::vector<double> zs(ks.size());
        std::uniform_real_distribution<double> frac(0.0, 1.0);
        for (std::size_t i = 0; i < ks.size(); ++i) zs[i] = frac(rng) * ks[i];

        std::vector<double> out(ks.size());
        kernels::log_delta_scalar(plan, ks.data(), zs.data(), out.data(), ks.size());
        for (std::size_t i = 0; i < ks.size(); ++i) {
            const double ref = log_delta_reference(stack, ks[i], zs[i]);
            CHECK(std::abs(out[i] - ref) <= 1e-13 * std::abs(ref) + 1e-15);
        }
    }
}

TEST_CASE("scalar split kernel matches the interaction reference") {
    std::mt19937_64 rng(2026);
    for (int it = 0; it < 30; ++it) {
        const Stack left = test::random_md_stack(rng, 1 + static_cast<int>(rng() % 3));
        const Stack right = test::random_mixed_stack(rng, 1 + static_cast<int>(rng() % 3));
        const double gap = 0.3 + 2.0 * static_cast<double>(rng() % 1000) / 1000.0;
        const StackPlan plan = StackPlan::compile_interaction(left, right, gap);
        CHECK(plan.split == left.size());

        const std::vector<double> ks = sample_kappas(rng, 7);
        std::vector<double> zs(ks.size(), 0.0);
        std::uniform_real_distribution<double> frac(0.0, 1.0);
        for (double& z : zs) z = frac(rng);
        for (std::size_t i = 0; i < ks.size(); ++i) zs[i] *= ks[i];

        std::vector<double> out(ks.size());
        kernels::log_delta_scalar(plan, ks.data(), zs.data(), out.data(), ks.size());
        for (std::size_t i = 0; i < ks.size(); ++i) {
            const double ref = log_interaction_reference(left, right, gap, ks[i], zs[i]);
            CHECK(std::abs(out[i] - ref) <= 1e-13 * std::abs(ref) + 1e-15);
        }
    }
}

#if defined(CASIMIR_HAVE_AVX2)

TEST_CASE("vector exp and log match libm") {
    if (!kernels::avx2_supported()) {
        MESSAGE("AVX2 not supported on this CPU; skipped");
        return;
    }
    std::mt19937_64 rng(909);
    std::uniform_real_distribution<double> xe(-700.0, 0.0);
    double in[4], out[4];
    for (int it = 0; it < 4000; ++it) {
        for (double& v : in) v = xe(rng);
        kernels::detail::exp4(in, out);
        for (int i = 0; i < 4; ++i) {
            const double ref = std::exp(in[i]);
            CHECK(std::abs(out[i] - ref) <= 4e-16 * ref);
        }
    }
    std::uniform_real_distribution<double> xl(-34.0, 1.5);
    for (int it = 0; it < 4000; ++it) {
        for (double& v : in) v = std::exp(xl(rng)); // 1.7e-15 .. 4.5
        kernels::detail::log4(in, out);
        for (int i = 0; i < 4; ++i) {
            const double ref = std::log(in[i]);
            CHECK(std::abs(out[i] - ref) <= 4e-16 * std::abs(ref) + 5e-16);
        }
    }
    // near one, where the energy integrand lives in the tails
    std::uniform_real_distribution<double> eps(-0.5, 0.5);
    for (int it = 0; it < 4000; ++it) {
        for (double& v : in) v = 1.0 + eps(rng);
        kernels::detail::log4(in, out);
        for (int i = 0; i < 4; ++i) {
            const double ref = std::log(in[i]);
            CHECK(std::abs(out[i] - ref) <= 6e-16 * std::abs(ref) + 1e-17);
        }
    }
}

TEST_CASE("avx2 kernel equals scalar kernel") {
    if (!kernels::avx2_supported()) {
        MESSAGE("AVX2 not supported on this CPU; skipped");
        return;
    }
    std::mt19937_64 rng(31415);
    for (int it = 0; it < 60; ++it) {
        const int n = 2 + static_cast<int>(rng() % 7);
        const Stack stack = (it % 3 == 0) ? test::random_mixed_stack(rng, n)
                                          : test::random_md_stack(rng, n);
        StackPlan plan = StackPlan::compile(stack);
        if (it % 4 == 0 && n >= 2) {
            // exercise the split path too
            const int s = 1 + static_cast<int>(rng() % (n - 1));
            plan = StackPlan::compile_interaction(stack.slice(1, s), stack.slice(s + 1, n),
                                                  stack.gap(s));
        }

        // odd count exercises the scalar tail
        const std::size_t count = 1 + static_cast<std::size_t>(rng() % 17);
        const std::vector<double> ks = sample_kappas(rng, count);
        std::vector<double> zs(count);
        std::uniform_real_distribution<double> frac(0.0, 1.0);
        for (std::size_t i = 0; i < count; ++i) zs[i] = frac(rng) * ks[i];

        std::vector<double> scalar_out(count), avx_out(count);
        kernels::log_delta_scalar(plan, ks.data(), zs.data(), scalar_out.data(), count);
        kernels::log_delta_avx2(plan, ks.data(), zs.data(), avx_out.data(), count);
        for (std::size_t i = 0; i < count; ++i) {
            CHECK(std::abs(avx_out[i] - scalar_out[i]) <=
                  1e-12 * std::abs(scalar_out[i]) + 1e-15);
        }
    }
}

#endif // CASIMIR_HAVE_AVX2

TEST_CASE("kernel dispatch honors the override") {
    kernels::force_kernel("scalar");
    CHECK(std::strcmp(kernels::active_kernel_name(), "scalar") == 0);
    CHECK(kernels::active_kernel() == &kernels::log_delta_scalar);
#if defined(CASIMIR_HAVE_AVX2)
    if (kernels::avx2_supported()) {
        kernels::force_kernel("avx2");
        CHECK(std::strcmp(kernels::active_kernel_name(), "avx2") == 0);
        CHECK(kernels::active_kernel() == &kernels::log_delta_avx2);
    }
#endif
    kernels::force_kernel(nullptr);
    // without an override the choice falls to CASIMIR_KERNEL, then the CPU
    const char* env = std::getenv("CASIMIR_KERNEL");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) {
        CHECK(std::strcmp(kernels::active_kernel_name(), "scalar") == 0);
    } else if (kernels::avx2_supported()) {
        CHECK(std::strcmp(kernels::active_kernel_name(), "avx2") == 0);
    } else {
        CHECK(std::strcmp(kernels::active_kernel_name(), "scalar") == 0);
    }
}
