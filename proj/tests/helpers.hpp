#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "casimir/stack.hpp"

namespace casimir::test {

inline double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

// Random magnetodielectric stack with lambda in [0, lambda_max], gaps in
// [gap_min, gap_max].
inline Stack random_md_stack(std::mt19937_64& rng, int n, double lambda_max = 10.0,
                             double gap_min = 0.1, double gap_max = 5.0) {
    std::uniform_real_distribution<double> lam(0.0, lambda_max);
    std::uniform_real_distribution<double> gap(gap_min, gap_max);
    std::vector<Plate> plates;
    double pos = 0.0;
    for (int i = 0; i < n; ++i) {
        plates.push_back(Plate::magnetodielectric(pos, lam(rng), lam(rng)));
        pos += gap(rng);
    }
    return Stack(std::move(plates));
}

// Stack mixing ideal and magnetodielectric plates.
inline Stack random_mixed_stack(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> lam(0.0, 5.0);
    std::uniform_real_distribution<double> gap(0.5, 2.0);
    std::uniform_int_distribution<int> kind(0, 3);
    std::vector<Plate> plates;
    double pos = 0.0;
    for (int i = 0; i < n; ++i) {
        switch (kind(rng)) {
        case 0: plates.push_back(Plate::perfect_e(pos)); break;
        case 1: plates.push_back(Plate::perfect_m(pos)); break;
        default: plates.push_back(Plate::magnetodielectric(pos, lam(rng), lam(rng))); break;
        }
        pos += gap(rng);
    }
    return Stack(std::move(plates));
}

inline SpectralPoint random_point(std::mt19937_64& rng, double zeta_max = 3.0,
                                  double extra_max = 5.0) {
    std::uniform_real_distribution<double> zeta(0.0, zeta_max);
    std::uniform_real_distribution<double> extra(0.01, extra_max);
    const double z = zeta(rng);
    return SpectralPoint::from_zeta_kappa(z, z + extra(rng));
}

} // namespace casimir::test
