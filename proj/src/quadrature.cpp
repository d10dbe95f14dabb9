#include "casimir/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "casimir/dual.hpp"
#include "casimir/kernels.hpp"
#include "casimir/scattering.hpp"

namespace casimir {

namespace {

constexpr double kQuarterInvPi2 = 0.025330295910584444; // 1/(4 pi^2)
constexpr double kHalfInvPi2 = 0.050660591821168888;    // 1/(2 pi^2)

// Gauss-7 / Kronrod-15 pair on [-1, 1]; positive nodes in descending order,
// Gauss nodes are the odd-indexed ones plus the centre.
constexpr double kNodes[7] = {
    0.99145537112081264, 0.94910791234275852, 0.86486442335976907,
    0.74153118559939444, 0.58608723546769113, 0.40584515137739717,
    0.20778495500789847};
constexpr double kWK[7] = {
    0.022935322010529225, 0.063092092629978553, 0.104790010322250184,
    0.140653259715525919, 0.169004726639267903, 0.190350578064785410,
    0.204432940075298892};
constexpr double kWKCenter = 0.209482141084727828;
constexpr double kWG[3] = {0.129484966168869693, 0.279705391489276668,
                           0.381830050505118945};
constexpr double kWGCenter = 0.417959183673469388;

using BatchFn = std::function<void(const double* x, double* y, std::size_t n)>;

struct Panel {
    double a = 0.0;
    double b = 0.0;
    double value = 0.0;
    double error = 0.0;
    long id = 0;
};

struct WorsePanel {
    bool operator()(const Panel& lhs, const Panel& rhs) const {
        if (lhs.error != rhs.error) return lhs.error < rhs.error;
        return lhs.id > rhs.id; // deterministic tie-break
    }
};

Panel evaluate_panel(const BatchFn& f, double a, double b, long id, long& evals) {
    const double c = 0.5 * (a + b);
    const double m = 0.5 * (b - a);
    double xs[15];
    double ys[15];
    for (int i = 0; i < 7; ++i) {
        xs[i] = c - m * kNodes[i];
        xs[14 - i] = c + m * kNodes[i];
    }
    xs[7] = c;
    f(xs, ys, 15);
    evals += 15;

    double k15 = kWKCenter * ys[7];
    double g7 = kWGCenter * ys[7];
    for (int i = 0; i < 7; ++i) {
        const double pair = ys[i] + ys[14 - i];
        k15 += kWK[i] * pair;
        if (i % 2 == 1) g7 += kWG[i / 2] * pair;
    }
    k15 *= m;
    g7 *= m;

    // QUADPACK-style scale-free error estimate.
    const double mean = k15 / (2.0 * m);
    double resasc = kWKCenter * std::abs(ys[7] - mean);
    for (int i = 0; i < 7; ++i) {
        resasc += kWK[i] * (std::abs(ys[i] - mean) + std::abs(ys[14 - i] - mean));
    }
    resasc *= m;
    const double diff = std::abs(k15 - g7);
    double err = diff;
    if (resasc > 0.0 && diff > 0.0) {
        err = resasc * std::min(1.0, std::pow(200.0 * diff / resasc, 1.5));
    }
    return {a, b, k15, err, id};
}

double pairwise_sum(const double* v, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(v, half) + pairwise_sum(v + half, n - half);
}

// Globally adaptive bisection on [a, b]: always split the worst panel.
IntegralEstimate adapt(const BatchFn& f, double a, double b, double rel_tol,
                       double abs_tol, int max_subdivisions, long& evals) {
    std::priority_queue<Panel, std::vector<Panel>, WorsePanel> queue;
    long next_id = 0;
    double total_v = 0.0;
    double total_e = 0.0;

    const int seed_panels = 8;
    for (int i = 0; i < seed_panels; ++i) {
        const double pa = a + (b - a) * i / seed_panels;
        const double pb = a + (b - a) * (i + 1) / seed_panels;
        Panel p = evaluate_panel(f, pa, pb, next_id++, evals);
        total_v += p.value;
        total_e += p.error;
        queue.push(p);
    }

    int splits = 0;
    int stagnant = 0;
    while (total_e > std::max(rel_tol * std::abs(total_v), abs_tol)) {
        if (splits >= max_subdivisions) {
            throw QuadratureNotConverged("adaptive quadrature ran out of subdivisions",
                                         total_v, total_e, evals);
        }
        Panel worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        Panel left = evaluate_panel(f, worst.a, mid, next_id++, evals);
        Panel right = evaluate_panel(f, mid, worst.b, next_id++, evals);
        total_v += left.value + right.value - worst.value;
        total_e += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++splits;
        // Roundoff floor: when subdividing stops shrinking the estimates the
        // integrand is resolved to machine noise; accept and report the
        // achieved error rather than burning the whole budget.
        if (left.error + right.error >= 0.99 * worst.error) {
            if (++stagnant >= 60) break;
        } else {
            stagnant = 0;
        }
    }

    // Recompute the total in position order so results do not depend on the
    // incidental accumulation sequence above.
    std::vector<Panel> panels;
    panels.reserve(queue.size());
    while (!queue.empty()) {
        panels.push_back(queue.top());
        queue.pop();
    }
    std::sort(panels.begin(), panels.end(),
              [](const Panel& l, const Panel& r) { return l.a < r.a; });
    std::vector<double> values;
    std::vector<double> errors;
    values.reserve(panels.size());
    errors.reserve(panels.size());
    for (const Panel& p : panels) {
        values.push_back(p.value);
        errors.push_back(p.error);
    }
    return {pairwise_sum(values.data(), values.size()),
            pairwise_sum(errors.data(), errors.size()), evals};
}

// Semi-infinite integral of a batched integrand over (lower, inf) via a map
// onto u in (0, 1). ExpMap: x = lower - ln(u)/s; RationalMap: x = lower + u/(1-u).
void validate(const QuadratureSpec& spec) {
    if (!(spec.rel_tol > 0.0) || !(spec.rel_tol_2d > 0.0)) {
        throw ValidationError("quadrature tolerances must be positive");
    }
    if (spec.max_subdivisions < 1) {
        throw ValidationError("max_subdivisions must be at least 1");
    }
}

IntegralEstimate integrate_semi_infinite_batch(const BatchFn& f, double lower,
                                               double rel_tol, double abs_tol,
                                               int max_subdivisions,
                                               Substitution sub, double scale,
                                               long& evals) {
    BatchFn mapped;
    if (sub == Substitution::ExpMap) {
        const double s = scale;
        mapped = [&f, lower, s](const double* u, double* y, std::size_t n) {
            double xs[15];
            for (std::size_t i = 0; i < n; ++i) xs[i] = lower - std::log(u[i]) / s;
            f(xs, y, n);
            for (std::size_t i = 0; i < n; ++i) y[i] /= s * u[i];
        };
    } else {
        mapped = [&f, lower](const double* u, double* y, std::size_t n) {
            double xs[15];
            for (std::size_t i = 0; i < n; ++i) xs[i] = lower + u[i] / (1.0 - u[i]);
            f(xs, y, n);
            for (std::size_t i = 0; i < n; ++i) {
                const double w = 1.0 - u[i];
                y[i] /= w * w;
            }
        };
    }
    return adapt(mapped, 0.0, 1.0, rel_tol, abs_tol, max_subdivisions, evals);
}

// ---------------------------------------------------------------------------
// Integrand assembly

// Batched sum over modes of log Delta (or the split interaction factor) with
// the kappa^p moment applied; uses the dispatched kernel.
BatchFn moment_kernel_integrand(const kernels::StackPlan& plan, double ctheta,
                                int moment) {
    kernels::LogDeltaFn kernel = kernels::active_kernel();
    return [plan, ctheta, moment, kernel](const double* x, double* y, std::size_t n) {
        double zs[15] = {};
        for (std::size_t i = 0; i < n; ++i) zs[i] = ctheta * x[i];
        kernel(plan, x, zs, y, n);
        for (std::size_t i = 0; i < n; ++i) {
            double k = x[i];
            double w = k * k;
            if (moment == 3) w *= k;
            y[i] *= w;
        }
    };
}

// Generic scalar fallback for stacks with dispersion hooks.
double log_delta_generic(const Stack& stack, double kappa, double zeta) {
    const SpectralPoint sp = SpectralPoint::from_zeta_kappa(zeta, kappa);
    return std::log(composite(stack, Mode::H, sp).delta) +
           std::log(composite(stack, Mode::E, sp).delta);
}

double log_interaction_generic(const Stack& left, const Stack& right, double gap,
                               double kappa, double zeta) {
    const SpectralPoint sp = SpectralPoint::from_zeta_kappa(zeta, kappa);
    const double u2 = std::exp(-2.0 * kappa * gap);
    double acc = 0.0;
    for (Mode mode : {Mode::H, Mode::E}) {
        const double rl = composite(left, mode, sp).r_right;
        const double rr = composite(right, mode, sp).r_left;
        acc += std::log1p(-rl * u2 * rr);
    }
    return acc;
}

BatchFn wrap_scalar(std::function<double(double)> f) {
    return [f = std::move(f)](const double* x, double* y, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) y[i] = f(x[i]);
    };
}

struct MeasureResult {
    double integral = 0.0;
    double error = 0.0;
    long evaluations = 0;
    IntegrationPath path = IntegrationPath::KappaOnly1D;
};

// Integrates a spectral integrand S(zeta, kappa) under
//   Int_0^inf dzeta Int_zeta^inf kappa dkappa S
// by the polar reduction Int_0^1 dc Int_0^inf kappa^2 S(c kappa, kappa) dkappa.
// make_inner(c) must produce the kappa^2-weighted batched integrand.
MeasureResult integrate_measure(const std::function<BatchFn(double)>& make_inner,
                                bool kappa_only, const QuadratureSpec& spec,
                                double decay_scale) {
    MeasureResult out;
    long evals = 0;
    if (kappa_only && !spec.force_general_2d) {
        IntegralEstimate est = integrate_semi_infinite_batch(
            make_inner(0.0), 0.0, spec.rel_tol, spec.abs_tol, spec.max_subdivisions,
            spec.substitution, decay_scale, evals);
        out.integral = est.value;
        out.error = est.error;
        out.evaluations = evals;
        out.path = IntegrationPath::KappaOnly1D;
        return out;
    }

    // The outer error estimate stalls on inner adaptivity noise, so the
    // inner integrals are solved three orders tighter than the outer target.
    const double inner_rel = std::max(spec.rel_tol_2d * 1e-3, 1e-13);
    BatchFn outer = [&](const double* cs, double* y, std::size_t n) {
        for (std::size_t i = 0; i < n; ++i) {
            IntegralEstimate est = integrate_semi_infinite_batch(
                make_inner(cs[i]), 0.0, inner_rel, spec.abs_tol,
                spec.max_subdivisions, spec.substitution, decay_scale, evals);
            y[i] = est.value;
        }
    };
    IntegralEstimate est =
        adapt(outer, 0.0, 1.0, spec.rel_tol_2d, spec.abs_tol, spec.max_subdivisions, evals);
    out.integral = est.value;
    out.error = est.error + std::abs(est.value) * inner_rel;
    out.evaluations = evals;
    out.path = IntegrationPath::General2D;
    return out;
}

// d(log Delta)/d(a_i) for both modes at one spectral point, via dual numbers
// seeded on the two gaps adjacent to plate i.
double dlog_delta_dposition(const Stack& stack, int plate_index, double kappa,
                            double zeta) {
    const SpectralPoint sp = SpectralPoint::from_zeta_kappa(zeta, kappa);
    const int n = stack.size();
    double acc = 0.0;
    for (Mode mode : {Mode::H, Mode::E}) {
        Coefficients c0 = coefficients(stack.plate(1), mode, sp);
        Dual rR(c0.r);
        Dual logsum(0.0);
        for (int j = 2; j <= n; ++j) {
            const int gap_index = j - 1; // between plates j-1 and j
            double seed = 0.0;
            if (gap_index == plate_index - 1) seed = 1.0;  // left gap grows with a_i
            if (gap_index == plate_index) seed = -1.0;     // right gap shrinks
            const Dual g(stack.gap(gap_index), seed);
            const Dual u = exp(Dual(-kappa) * g);
            const Dual u2 = u * u;
            const Coefficients cj = coefficients(stack.plate(j), mode, sp);
            const Dual x = rR * u2 * Dual(cj.r);
            logsum = logsum + log1p(-x);
            rR = Dual(cj.r) + Dual(cj.t * cj.t) * u2 * rR / (Dual(1.0) - x);
        }
        acc += logsum.d;
    }
    return acc;
}

} // namespace

IntegralEstimate integrate_semi_infinite(const std::function<double(double)>& f,
                                         double lower, const QuadratureSpec& spec,
                                         double decay_scale) {
    validate(spec);
    long evals = 0;
    return integrate_semi_infinite_batch(wrap_scalar(f), lower, spec.rel_tol,
                                         spec.abs_tol, spec.max_subdivisions,
                                         spec.substitution, decay_scale, evals);
}

EnergyResult energy_per_area(const Stack& stack, const QuadratureSpec& spec) {
    validate(spec);
    if (stack.size() < 2) throw TooFewPlates("energy_per_area: need N >= 2");

    const double scale = stack.min_gap();
    MeasureResult m;
    if (stack.has_response_hook()) {
        auto make_inner = [&stack](double c) {
            return wrap_scalar([&stack, c](double k) {
                return k * k * log_delta_generic(stack, k, c * k);
            });
        };
        m = integrate_measure(make_inner, false, spec, scale);
    } else {
        const kernels::StackPlan plan = kernels::StackPlan::compile(stack);
        auto make_inner = [&plan](double c) { return moment_kernel_integrand(plan, c, 2); };
        m = integrate_measure(make_inner, plan.kappa_only, spec, scale);
    }
    return {kQuarterInvPi2 * m.integral, kQuarterInvPi2 * m.error, m.evaluations, m.path};
}

EnergyResult interaction_energy(const Stack& left, const Stack& right, double gap,
                                const QuadratureSpec& spec) {
    validate(spec);
    if (!(gap > 0.0)) throw ValidationError("interaction_energy: gap must be positive");

    double scale = gap;
    for (int i = 1; i < left.size(); ++i) scale = std::min(scale, left.gap(i));
    for (int i = 1; i < right.size(); ++i) scale = std::min(scale, right.gap(i));

    MeasureResult m;
    if (left.has_response_hook() || right.has_response_hook()) {
        auto make_inner = [&left, &right, gap](double c) {
            return wrap_scalar([&left, &right, gap, c](double k) {
                return k * k * log_interaction_generic(left, right, gap, k, c * k);
            });
        };
        m = integrate_measure(make_inner, false, spec, scale);
    } else {
        const kernels::StackPlan plan =
            kernels::StackPlan::compile_interaction(left, right, gap);
        auto make_inner = [&plan](double c) { return moment_kernel_integrand(plan, c, 2); };
        m = integrate_measure(make_inner, plan.kappa_only, spec, scale);
    }
    return {kQuarterInvPi2 * m.integral, kQuarterInvPi2 * m.error, m.evaluations, m.path};
}

PressureResult pressure_on_plate(const Stack& stack, int i, const QuadratureSpec& spec) {
    validate(spec);
    if (stack.size() < 2) throw TooFewPlates("pressure_on_plate: need N >= 2");
    if (i < 1 || i > stack.size()) throw IndexOutOfRange("pressure_on_plate: bad plate index");

    const double scale = stack.min_gap();
    auto make_inner = [&stack, i](double c) {
        return wrap_scalar([&stack, i, c](double k) {
            return k * k * dlog_delta_dposition(stack, i, k, c * k);
        });
    };
    MeasureResult m = integrate_measure(make_inner, stack.kappa_only(), spec, scale);
    return {-kQuarterInvPi2 * m.integral, kQuarterInvPi2 * m.error, m.evaluations, m.path};
}

PressureResult pressure_two_plates_stress(const Stack& stack, const QuadratureSpec& spec) {
    validate(spec);
    if (stack.size() != 2) throw ValidationError("pressure_two_plates_stress: need exactly N = 2");
    if (!stack.kappa_only()) {
        throw RequiresKappaOnly("pressure_two_plates_stress: plates must be kappa-only");
    }
    const double a = stack.gap(1);
    auto f = [&stack, a](double k) {
        const SpectralPoint sp = SpectralPoint::from_zeta_kappa(0.0, k);
        const double e2 = std::exp(-2.0 * k * a);
        double sum = 0.0;
        for (Mode mode : {Mode::H, Mode::E}) {
            const double r1 = coefficients(stack.plate(1), mode, sp).r;
            const double r2 = coefficients(stack.plate(2), mode, sp).r;
            sum += r1 * r2 * e2 / delta_nn(stack, 1, mode, sp);
        }
        return k * k * k * sum;
    };
    long evals = 0;
    IntegralEstimate est = integrate_semi_infinite_batch(
        wrap_scalar(f), 0.0, spec.rel_tol, spec.abs_tol, spec.max_subdivisions,
        spec.substitution, a, evals);
    return {-kHalfInvPi2 * est.value, kHalfInvPi2 * est.error, evals,
            IntegrationPath::KappaOnly1D};
}

PressureResult pressure_three_plates_stress(const Stack& stack, const QuadratureSpec& spec) {
    validate(spec);
    if (stack.size() != 3) throw ValidationError("pressure_three_plates_stress: need exactly N = 3");
    if (!stack.kappa_only()) {
        throw RequiresKappaOnly("pressure_three_plates_stress: plates must be kappa-only");
    }
    const double a = stack.gap(1);
    const double b = stack.gap(2);
    auto f = [&stack, a, b](double k) {
        const SpectralPoint sp = SpectralPoint::from_zeta_kappa(0.0, k);
        const double e2b = std::exp(-2.0 * k * b);
        const double e2ab = std::exp(-2.0 * k * (a + b));
        double sum = 0.0;
        for (Mode mode : {Mode::H, Mode::E}) {
            const double r1 = coefficients(stack.plate(1), mode, sp).r;
            const double r2 = coefficients(stack.plate(2), mode, sp).r;
            const double t2 = coefficients(stack.plate(2), mode, sp).t;
            const double r3 = coefficients(stack.plate(3), mode, sp).r;
            const double d12 = delta_nn(stack, 1, mode, sp);
            const double d123 = delta_chain(stack, mode, sp);
            sum += r2 * r3 * e2b * d12 / d123 + r1 * t2 * t2 * r3 * e2ab / d123;
        }
        return k * k * k * sum;
    };
    long evals = 0;
    IntegralEstimate est = integrate_semi_infinite_batch(
        wrap_scalar(f), 0.0, spec.rel_tol, spec.abs_tol, spec.max_subdivisions,
        spec.substitution, std::min(a, b), evals);
    return {-kHalfInvPi2 * est.value, kHalfInvPi2 * est.error, evals,
            IntegrationPath::KappaOnly1D};
}

} // namespace casimir
