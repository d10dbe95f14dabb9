#include <array>
#include <cmath>

#include "casimir/kernels.hpp"

namespace casimir::kernels {

namespace {

// r and t of plate i for one mode; mode_e swaps the couplings.
inline void plate_rt(const StackPlan& p, std::size_t i, bool mode_e, double kappa,
                     double zeta2, double& r, double& t) {
    switch (p.kind[i]) {
    case StackPlan::PerfectE:
        r = mode_e ? -1.0 : 1.0;
        t = 0.0;
        return;
    case StackPlan::PerfectM:
        r = mode_e ? 1.0 : -1.0;
        t = 0.0;
        return;
    default:
        break;
    }
    const double le = mode_e ? p.lambda_g[i] : p.lambda_e[i];
    const double lg = mode_e ? p.lambda_e[i] : p.lambda_g[i];
    const double qg = lg * zeta2 / (lg * zeta2 + 2.0 * kappa);
    const double qe = le * kappa / (le * kappa + 2.0);
    r = qe - qg;
    t = 1.0 - qg - qe;
}

} // namespace

void log_delta_scalar(const StackPlan& plan, const double* kappa,
                      const double* zeta, double* out, std::size_t count) {
    const std::size_t n = static_cast<std::size_t>(plan.n);
    std::array<double, 63> u2{};
    for (std::size_t p = 0; p < count; ++p) {
        const double K = kappa[p];
        const double Z2 = zeta[p] * zeta[p];
        for (std::size_t j = 0; j + 1 < n; ++j) {
            const double u = std::exp(-K * plan.gap[j]);
            u2[j] = u * u;
        }
        double acc = 0.0;
        for (int mode = 0; mode < 2; ++mode) {
            const bool mode_e = mode != 0;
            if (plan.split < 0) {
                double r0, t0;
                plate_rt(plan, 0, mode_e, K, Z2, r0, t0);
                double rR = r0;
                for (std::size_t j = 1; j < n; ++j) {
                    double rj, tj;
                    plate_rt(plan, j, mode_e, K, Z2, rj, tj);
                    // log1p keeps the tail relatively accurate where the
                    // round trip is tiny
                    const double x = rR * u2[j - 1] * rj;
                    acc += std::log1p(-x);
                    rR = rj + tj * tj * u2[j - 1] * rR / (1.0 - x);
                }
            } else {
                const std::size_t s = static_cast<std::size_t>(plan.split);
                double rR, t0;
                plate_rt(plan, 0, mode_e, K, Z2, rR, t0);
                for (std::size_t j = 1; j < s; ++j) {
                    double rj, tj;
                    plate_rt(plan, j, mode_e, K, Z2, rj, tj);
                    const double dp = 1.0 - rR * u2[j - 1] * rj;
                    rR = rj + tj * tj * u2[j - 1] * rR / dp;
                }
                double rL, tn;
                plate_rt(plan, n - 1, mode_e, K, Z2, rL, tn);
                for (std::size_t j = n - 1; j-- > s;) {
                    double rj, tj;
                    plate_rt(plan, j, mode_e, K, Z2, rj, tj);
                    const double dp = 1.0 - rj * u2[j] * rL;
                    rL = rj + tj * tj * u2[j] * rL / dp;
                }
                acc += std::log1p(-rR * u2[s - 1] * rL);
            }
        }
        out[p] = acc;
    }
}

} // namespace casimir::kernels
