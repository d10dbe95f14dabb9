#pragma once

#include <utility>
#include <vector>

#include "casimir/stack.hpp"

namespace casimir {

struct GreensQuery {
    double z = 0.0;
    double zprime = 0.0;
    Mode mode = Mode::H;
    SpectralPoint sp;
};

// One propagation path of a region entry: its value at separation factors is
// amplitude * e^{-kappa*(pathlength + |z - a_obs| + |z' - a_src|)} / 2 kappa.
// Every 1/Delta has already been resolved into the amplitude.
struct PathTerm {
    double amplitude = 0.0;
    double pathlength = 0.0;
    int src_plane = 0; // 1-based plate whose plane anchors the source factor
    int obs_plane = 0;
};

// The (N+1) x (N+1) region matrix of the Green's function, rows indexing the
// source region from the top (row 1: z' above the last plate) and columns
// the observer region from the left. Entries on the anti-diagonal
// (i + j - 2 == N) also carry the free propagator.
class RegionMatrix {
public:
    RegionMatrix(int n_plates,
                 std::vector<std::vector<std::vector<PathTerm>>> entries)
        : n_(n_plates), entries_(std::move(entries)) {}

    int plates() const { return n_; }
    int regions() const { return n_ + 1; }

    const std::vector<PathTerm>& entry(int i, int j) const {
        if (i < 1 || i > regions() || j < 1 || j > regions()) {
            throw IndexOutOfRange("region matrix index out of range");
        }
        return entries_[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
    }

    bool has_free_term(int i, int j) const { return i + j - 2 == n_; }

    // B-matrix reading of an entry: sum of amplitude * e^{-kappa*path}.
    double entry_value(int i, int j, double kappa) const;

private:
    int n_;
    std::vector<std::vector<std::vector<PathTerm>>> entries_;
};

// Closed-form region matrix for 1 <= N <= 3 plates at one spectral point.
RegionMatrix region_matrix(const Stack& stack, Mode mode, const SpectralPoint& sp);

// Region label (i, j) of an evaluation point pair.
std::pair<int, int> greens_region(const Stack& stack, double z, double zprime);

// g^{N,mode}(z, z') for N <= 3.
double greens_value(const Stack& stack, const GreensQuery& q);

// | -d^2g/dz^2 + kappa^2 g | by central differences; vanishes in vacuum away
// from the source, so the return is pure discretisation error.
double check_ode_residual(const Stack& stack, const GreensQuery& q, double h);

// Residuals of the two delta-plate matching conditions at plate i, evaluated
// at z = a_i +- h with one-sided first-order derivative stencils. For mode H
// the value jump carries lambda_e and the derivative jump zeta^2 lambda_g;
// mode E swaps them. Both residuals are O(h).
std::pair<double, double> check_jump_conditions(const Stack& stack, int i,
                                                double zprime, Mode mode,
                                                const SpectralPoint& sp, double h);

} // namespace casimir
