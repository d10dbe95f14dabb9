#include "casimir/scattering.hpp"

#include <cmath>

namespace casimir {

double delta_nn(const Stack& stack, int i, Mode mode, const SpectralPoint& sp) {
    if (i < 1 || i >= stack.size()) throw IndexOutOfRange("delta_nn: need 1 <= i <= N-1");
    const double u = std::exp(-sp.kappa * stack.gap(i));
    const double ri = coefficients(stack.plate(i), mode, sp).r;
    const double rj = coefficients(stack.plate(i + 1), mode, sp).r;
    return 1.0 - ri * u * rj * u;
}

double delta_far(const Stack& stack, int i, int k, Mode mode, const SpectralPoint& sp) {
    if (i < 1 || k > stack.size()) throw IndexOutOfRange("delta_far: plate index out of range");
    if (k < i + 2) throw NotNonAdjacent("delta_far: need k >= i+2");
    double amp = coefficients(stack.plate(i), mode, sp).r;
    for (int m = i + 1; m < k; ++m) {
        const double tm = coefficients(stack.plate(m), mode, sp).t;
        amp *= tm * tm;
    }
    amp *= coefficients(stack.plate(k), mode, sp).r;
    const double span = stack.plate(k).position - stack.plate(i).position;
    return -amp * std::exp(-2.0 * sp.kappa * span);
}

std::vector<std::vector<int>> enumerate_chains(int n) {
    if (n < 2) throw TooSmall("enumerate_chains: need n >= 2");
    // Interior plates 2..n-1 are each in or out; lexicographic order falls out
    // of the recursion over the next member.
    std::vector<std::vector<int>> chains;
    std::vector<int> current{1};
    // Iterative DFS would do; recursion depth is at most n.
    struct Rec {
        int n;
        std::vector<std::vector<int>>& chains;
        void operator()(std::vector<int>& cur) const {
            const int last = cur.back();
            if (last == n) {
                chains.push_back(cur);
                return;
            }
            for (int next = last + 1; next <= n; ++next) {
                cur.push_back(next);
                (*this)(cur);
                cur.pop_back();
            }
        }
    };
    // Plain subset recursion visits [.., last+1] before [.., last+2], which is
    // exactly lexicographic on the index sequences.
    Rec{n, chains}(current);
    return chains;
}

namespace {

double pair_delta(const Stack& stack, int i, int k, Mode mode, const SpectralPoint& sp) {
    return k == i + 1 ? delta_nn(stack, i, mode, sp) : delta_far(stack, i, k, mode, sp);
}

} // namespace

double delta_chain(const Stack& stack, Mode mode, const SpectralPoint& sp) {
    const int n = stack.size();
    if (n < 2) throw TooSmall("delta_chain: need N >= 2");
    if (n == 2) return delta_nn(stack, 1, mode, sp);
    double sum = 0.0;
    for (const auto& chain : enumerate_chains(n)) {
        double prod = 1.0;
        for (std::size_t q = 0; q + 1 < chain.size(); ++q) {
            prod *= pair_delta(stack, chain[q], chain[q + 1], mode, sp);
        }
        sum += prod;
    }
    return sum;
}

CompositeCoefficients combine(const CompositeCoefficients& left,
                              const CompositeCoefficients& right,
                              double gap, const SpectralPoint& sp) {
    if (!(gap > 0.0)) throw ValidationError("combine: gap must be positive");
    const double u = std::exp(-sp.kappa * gap);
    const double u2 = u * u;
    const double dp = 1.0 - left.r_right * u2 * right.r_left;
    if (!(dp > 0.0)) throw DegenerateCavity("combine: non-positive pair denominator");
    CompositeCoefficients out;
    out.r_right = right.r_right + right.t * u2 * left.r_right * right.t / dp;
    out.r_left = left.r_left + left.t * u2 * right.r_left * left.t / dp;
    out.t = left.t * u * right.t / dp;
    out.delta = left.delta * right.delta * dp;
    return out;
}

CompositeCoefficients plate_composite(const Plate& plate, Mode mode, const SpectralPoint& sp) {
    const Coefficients c = coefficients(plate, mode, sp);
    return {c.r, c.r, c.t, 1.0};
}

CompositeCoefficients composite(const Stack& stack, Mode mode, const SpectralPoint& sp) {
    CompositeCoefficients acc = plate_composite(stack.plate(1), mode, sp);
    for (int i = 2; i <= stack.size(); ++i) {
        acc = combine(acc, plate_composite(stack.plate(i), mode, sp), stack.gap(i - 1), sp);
    }
    return acc;
}

double Loop::amplitude(const Stack& stack, Mode mode, const SpectralPoint& sp) const {
    double amp = 1.0;
    for (const Factor& f : factors) {
        const Coefficients c = coefficients(stack.plate(f.plate), mode, sp);
        amp *= f.kind == Factor::Kind::Reflection ? c.r : c.t;
    }
    return adjacent() ? amp : -amp;
}

double Loop::delta_value(const Stack& stack, Mode mode, const SpectralPoint& sp) const {
    const double a = amplitude(stack, mode, sp);
    const double e = std::exp(-sp.kappa * pathlength);
    return adjacent() ? 1.0 - a * e : a * e;
}

std::string Loop::label() const {
    return "D" + std::to_string(i) + std::to_string(k);
}

namespace {

Loop make_loop(const Stack& stack, int i, int k) {
    Loop loop;
    loop.i = i;
    loop.k = k;
    loop.factors.push_back({Loop::Factor::Kind::Reflection, i});
    for (int m = i + 1; m < k; ++m) {
        loop.factors.push_back({Loop::Factor::Kind::Transmission, m});
        loop.factors.push_back({Loop::Factor::Kind::Transmission, m});
    }
    loop.factors.push_back({Loop::Factor::Kind::Reflection, k});
    loop.pathlength = 2.0 * (stack.plate(k).position - stack.plate(i).position);
    return loop;
}

} // namespace

std::vector<std::vector<Loop>> loop_terms(const Stack& stack, Mode /*mode*/) {
    const int n = stack.size();
    if (n < 2) throw TooSmall("loop_terms: need N >= 2");
    std::vector<std::vector<Loop>> out;
    for (const auto& chain : enumerate_chains(n)) {
        std::vector<Loop> loops;
        for (std::size_t q = 0; q + 1 < chain.size(); ++q) {
            loops.push_back(make_loop(stack, chain[q], chain[q + 1]));
        }
        out.push_back(std::move(loops));
    }
    return out;
}

} // namespace casimir
