#include <algorithm>

#include "casimir/kernels.hpp"

namespace casimir::kernels {

namespace {

void append_plates(StackPlan& plan, const Stack& stack) {
    for (const Plate& p : stack.plates()) {
        if (p.response) {
            throw ValidationError("kernel plans require constant couplings");
        }
        switch (p.kind) {
        case PlateKind::PerfectE: plan.kind.push_back(StackPlan::PerfectE); break;
        case PlateKind::PerfectM: plan.kind.push_back(StackPlan::PerfectM); break;
        case PlateKind::Magnetodielectric: plan.kind.push_back(StackPlan::MD); break;
        }
        plan.lambda_e.push_back(p.lambda_e);
        plan.lambda_g.push_back(p.lambda_g);
    }
    for (int i = 1; i < stack.size(); ++i) plan.gap.push_back(stack.gap(i));
}

void finalize(StackPlan& plan) {
    plan.n = static_cast<int>(plan.kind.size());
    if (plan.n > 64) throw ValidationError("kernel plans support at most 64 plates");
    plan.min_gap = plan.gap.empty() ? 0.0 : plan.gap.front();
    for (double g : plan.gap) plan.min_gap = std::min(plan.min_gap, g);
    plan.kappa_only = true;
    for (int i = 0; i < plan.n; ++i) {
        if (plan.kind[static_cast<std::size_t>(i)] == StackPlan::MD &&
            (plan.lambda_e[static_cast<std::size_t>(i)] != 0.0 ||
             plan.lambda_g[static_cast<std::size_t>(i)] != 0.0)) {
            plan.kappa_only = false;
            break;
        }
    }
}

} // namespace

StackPlan StackPlan::compile(const Stack& stack) {
    StackPlan plan;
    append_plates(plan, stack);
    finalize(plan);
    return plan;
}

StackPlan StackPlan::compile_interaction(const Stack& left, const Stack& right,
                                         double junction_gap) {
    if (!(junction_gap > 0.0)) throw ValidationError("junction gap must be positive");
    StackPlan plan;
    append_plates(plan, left);
    plan.gap.push_back(junction_gap);
    append_plates(plan, right);
    finalize(plan);
    plan.split = left.size();
    return plan;
}

} // namespace casimir::kernels
