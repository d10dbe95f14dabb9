#pragma once

#include <string>
#include <vector>

#include "casimir/stack.hpp"

namespace casimir {

// Reflection and transmission of a multi-plate body. r_left (R^>) is the
// reflection for incidence from the left, referenced to the leftmost plate
// plane; r_right (R^<) for incidence from the right, referenced to the
// rightmost plane; t is the transmission (equal both ways); delta is the
// body's internal multiple-scattering parameter.
struct CompositeCoefficients {
    double r_left = 0.0;
    double r_right = 0.0;
    double t = 1.0;
    double delta = 1.0;
};

// Nearest-neighbour parameter Delta_{i,i+1} = 1 - r_i r_{i+1} e^{-2 kappa l}.
double delta_nn(const Stack& stack, int i, Mode mode, const SpectralPoint& sp);

// Non-adjacent loop Delta_{ik} = -r_i (prod t_m^2) r_k e^{-2 kappa (a_k - a_i)}
// for k >= i+2; the minus sign lives in the definition.
double delta_far(const Stack& stack, int i, int k, Mode mode, const SpectralPoint& sp);

// All increasing index sequences 1 = i0 < i1 < ... < im = n, in lexicographic
// order; there are 2^{n-2} of them.
std::vector<std::vector<int>> enumerate_chains(int n);

// Partition expansion Delta_{12...N}: sum over chains of products of pair
// parameters, adjacent pairs via delta_nn and the rest via delta_far.
double delta_chain(const Stack& stack, Mode mode, const SpectralPoint& sp);

// Fabry-Perot composition of two bodies across a gap. delta' multiplies the
// bodies' deltas by the pair denominator, so a full fold reproduces
// Delta_{12...N} in factorized form.
CompositeCoefficients combine(const CompositeCoefficients& left,
                              const CompositeCoefficients& right,
                              double gap, const SpectralPoint& sp);

CompositeCoefficients plate_composite(const Plate& plate, Mode mode, const SpectralPoint& sp);

// Left fold of combine over the stack.
CompositeCoefficients composite(const Stack& stack, Mode mode, const SpectralPoint& sp);

// One pair factor of a chain, kept symbolic: which r/t of which plate and the
// total propagation length. delta_value() turns it into the pair's Delta at a
// spectral point; the product over a chain reproduces a delta_chain summand.
struct Loop {
    struct Factor {
        enum class Kind { Reflection, Transmission };
        Kind kind;
        int plate; // 1-based
    };

    int i = 0; // 1-based pair (i, k), k == i+1 means nearest neighbour
    int k = 0;
    std::vector<Factor> factors;
    double pathlength = 0.0;

    bool adjacent() const { return k == i + 1; }

    // Product of the r/t factor values with the far-loop sign included.
    double amplitude(const Stack& stack, Mode mode, const SpectralPoint& sp) const;

    // Delta_{ik}: 1 - amplitude*e^{-kappa*path} for adjacent pairs,
    // amplitude*e^{-kappa*path} (sign already inside) otherwise.
    double delta_value(const Stack& stack, Mode mode, const SpectralPoint& sp) const;

    std::string label() const; // e.g. "D13"
};

// For each chain of enumerate_chains(N), the list of its pair loops.
std::vector<std::vector<Loop>> loop_terms(const Stack& stack, Mode mode);

} // namespace casimir
