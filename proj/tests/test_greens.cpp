#include <algorithm>
#include <cmath>

#include <doctest.h>

#include "casimir/greens.hpp"
#include "casimir/scattering.hpp"
#include "helpers.hpp"

using namespace casimir;

namespace {

const SpectralPoint kUnit = SpectralPoint::from_zeta_kperp(0.0, 1.0);

Stack vacuum_stack(int n) {
    std::vector<Plate> plates;
    for (int i = 0; i < n; ++i) plates.push_back(Plate::magnetodielectric(0.7 * i, 0.0, 0.0));
    return Stack(std::move(plates));
}

double free_g(double z, double zp, double kappa) {
    return std::exp(-kappa * std::abs(z - zp)) / (2.0 * kappa);
}

// (amplitude, pathlength) multiset comparison for the anti-diagonal symmetry.
bool same_term_multiset(std::vector<PathTerm> a, std::vector<PathTerm> b) {
    if (a.size() != b.size()) return false;
    auto order = [](const PathTerm& l, const PathTerm& r) {
        if (l.pathlength != r.pathlength) return l.pathlength < r.pathlength;
        return l.amplitude < r.amplitude;
    };
    std::sort(a.begin(), a.end(), order);
    std::sort(b.begin(), b.end(), order);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (std::abs(a[i].pathlength - b[i].pathlength) > 1e-12) return false;
        if (test::rel_diff(a[i].amplitude, b[i].amplitude) > 1e-13) return false;
    }
    return true;
}

} // namespace

TEST_CASE("free-space limit is exact for vacuum stacks") {
    std::mt19937_64 rng(12);
    for (int n = 1; n <= 3; ++n) {
        const Stack stack = vacuum_stack(n);
        std::uniform_real_distribution<double> pos(-1.5, 0.7 * n + 1.5);
        for (int it = 0; it < 30; ++it) {
            const SpectralPoint sp = test::random_point(rng);
            double z = pos(rng);
            double zp = pos(rng);
            const double g = greens_value(stack, {z, zp, Mode::H, sp});
            CHECK(test::rel_diff(g, free_g(z, zp, sp.kappa)) <= 1e-14);
        }
    }
}

TEST_CASE("single perfect plate closed form") {
    const Stack stack({Plate::perfect_e(0.25)});
    const double kappa = 1.3;
    const SpectralPoint sp = SpectralPoint::from_zeta_kperp(0.0, kappa);
    // both points to the right of the plate, mode H has r = 1
    const double z = 1.1;
    const double zp = 2.4;
    const double expected = free_g(z, zp, kappa) +
                            std::exp(-kappa * (z - 0.25)) * std::exp(-kappa * (zp - 0.25)) /
                                (2.0 * kappa);
    CHECK(test::rel_diff(greens_value(stack, {z, zp, Mode::H, sp}), expected) <= 1e-14);
    // mode E mirrors with r = -1
    const double expected_e = free_g(z, zp, kappa) -
                              std::exp(-kappa * (z - 0.25)) * std::exp(-kappa * (zp - 0.25)) /
                                  (2.0 * kappa);
    CHECK(test::rel_diff(greens_value(stack, {z, zp, Mode::E, sp}), expected_e) <= 1e-14);
}

TEST_CASE("two-plate transmitted region matches the closed form") {
    // region (3,3): z' < a1 < a2 < z
    const Stack stack({Plate::magnetodielectric(0.0, 2.0, 1.0),
                       Plate::magnetodielectric(0.8, 3.0, 0.5)});
    const SpectralPoint sp = SpectralPoint::from_zeta_kperp(0.6, 1.1);
    const double kappa = sp.kappa;
    const double z = 1.7;
    const double zp = -0.9;
    for (Mode mode : {Mode::H, Mode::E}) {
        const double t1 = coefficients(stack.plate(1), mode, sp).t;
        const double t2 = coefficients(stack.plate(2), mode, sp).t;
        const double d12 = delta_nn(stack, 1, mode, sp);
        const double expected = t2 * std::exp(-kappa * 0.8) * t1 *
                                std::exp(-kappa * (z - 0.8)) * std::exp(-kappa * (0.0 - zp)) /
                                (2.0 * kappa * d12);
        CHECK(test::rel_diff(greens_value(stack, {z, zp, mode, sp}), expected) <= 1e-13);
        CHECK(greens_region(stack, z, zp) == std::pair<int, int>{3, 3});
    }
}

TEST_CASE("region labels") {
    const Stack stack({Plate::perfect_e(0.0), Plate::perfect_e(1.0)});
    CHECK(greens_region(stack, -0.5, 2.0) == std::pair<int, int>{1, 1});
    CHECK(greens_region(stack, 0.5, 2.0) == std::pair<int, int>{1, 2});
    CHECK(greens_region(stack, 2.0, 1.5) == std::pair<int, int>{1, 3});
    CHECK(greens_region(stack, 0.3, 0.6) == std::pair<int, int>{2, 2});
    CHECK(greens_region(stack, -1.0, -2.0) == std::pair<int, int>{3, 1});
    CHECK_THROWS_AS(greens_region(stack, 1.0, 0.5), OnPlatePlane);
    CHECK_THROWS_AS(greens_region(vacuum_stack(4), 0.1, 0.2), UnsupportedN);
}

TEST_CASE("reciprocity for randomized stacks and queries") {
    std::mt19937_64 rng(808);
    for (int n = 1; n <= 3; ++n) {
        for (int it = 0; it < 25; ++it) {
            const Stack stack = test::random_md_stack(rng, n, 8.0, 0.4, 2.0);
            const SpectralPoint sp = test::random_point(rng);
            const double lo = stack.plate(1).position;
            const double hi = stack.plate(n).position;
            std::uniform_real_distribution<double> pos(lo - 2.0, hi + 2.0);
            for (int q = 0; q < 6; ++q) {
                double z = pos(rng);
                double zp = pos(rng);
                bool on_plate = false;
                for (int i = 1; i <= n; ++i) {
                    if (z == stack.plate(i).position || zp == stack.plate(i).position) {
                        on_plate = true;
                    }
                }
                if (on_plate || z == zp) continue;
                for (Mode mode : {Mode::H, Mode::E}) {
                    const double g1 = greens_value(stack, {z, zp, mode, sp});
                    const double g2 = greens_value(stack, {zp, z, mode, sp});
                    CHECK(test::rel_diff(g1, g2) <= 1e-12);
                }
            }
        }
    }
}

TEST_CASE("corner entries equal composite coefficients") {
    std::mt19937_64 rng(606);
    for (int n = 1; n <= 3; ++n) {
        for (int it = 0; it < 25; ++it) {
            const Stack stack = test::random_md_stack(rng, n, 8.0, 0.3, 2.5);
            const SpectralPoint sp = test::random_point(rng);
            for (Mode mode : {Mode::H, Mode::E}) {
                const RegionMatrix mat = region_matrix(stack, mode, sp);
                const CompositeCoefficients c = composite(stack, mode, sp);
                const double k = sp.kappa;
                CHECK(test::rel_diff(mat.entry_value(1, n + 1, k), c.r_right) <= 1e-12);
                CHECK(test::rel_diff(mat.entry_value(n + 1, 1, k), c.r_left) <= 1e-12);
                CHECK(test::rel_diff(mat.entry_value(1, 1, k), c.t) <= 1e-12);
                CHECK(test::rel_diff(mat.entry_value(n + 1, n + 1, k), c.t) <= 1e-12);
            }
        }
    }
}

TEST_CASE("region matrix is symmetric across the anti-diagonal") {
    std::mt19937_64 rng(404);
    for (int n = 1; n <= 3; ++n) {
        for (int it = 0; it < 15; ++it) {
            const Stack stack = test::random_md_stack(rng, n, 6.0, 0.4, 2.0);
            const SpectralPoint sp = test::random_point(rng);
            for (Mode mode : {Mode::H, Mode::E}) {
                const RegionMatrix mat = region_matrix(stack, mode, sp);
                for (int i = 1; i <= n + 1; ++i) {
                    for (int j = 1; j <= n + 1; ++j) {
                        CHECK(same_term_multiset(mat.entry(i, j),
                                                 mat.entry(n + 2 - j, n + 2 - i)));
                    }
                }
            }
        }
    }
}

TEST_CASE("mode swap equals coupling swap for the Green's function") {
    std::mt19937_64 rng(202);
    for (int n = 1; n <= 3; ++n) {
        const Stack stack = test::random_md_stack(rng, n, 6.0, 0.5, 1.5);
        const Stack swapped = stack.lambda_swapped();
        const SpectralPoint sp = test::random_point(rng);
        const double hi = stack.plate(n).position;
        const double z = hi + 0.9;
        const double zp = stack.plate(1).position - 0.4;
        CHECK(greens_value(stack, {z, zp, Mode::E, sp}) ==
              greens_value(swapped, {z, zp, Mode::H, sp}));
    }
}

TEST_CASE("ode residual vanishes at second order") {
    // free propagator first
    const Stack vac = vacuum_stack(1);
    const SpectralPoint sp = kUnit;
    const double res_free = check_ode_residual(vac, {0.9, 2.0, Mode::H, sp}, 1e-3);
    CHECK(res_free <= 1e-6);

    // two plates with r = t = 1/2 at kappa = 1, both points inside the cavity
    const double gap = std::log(2.0);
    const Stack hh({Plate::magnetodielectric(0.0, 2.0, 0.0),
                    Plate::magnetodielectric(gap, 2.0, 0.0)});
    const GreensQuery q{0.3 * gap, 0.7 * gap, Mode::H, sp};
    const double g = greens_value(hh, q);

    const double res = check_ode_residual(hh, q, 1e-4);
    CHECK(res / (std::abs(g) * sp.kappa * sp.kappa) <= 1e-6);

    // h-halving in the clean truncation regime shows the h^2 order
    const double r1 = check_ode_residual(hh, q, 1e-2);
    const double r2 = check_ode_residual(hh, q, 5e-3);
    CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.15));

    CHECK_THROWS_AS(check_ode_residual(hh, {gap + 1e-9, 0.1, Mode::H, sp}, 1e-4),
                    StraddlesPlateOrSource);
    CHECK_THROWS_AS(check_ode_residual(hh, {0.3, 0.3 + 1e-9, Mode::H, sp}, 1e-4),
                    StraddlesPlateOrSource);
}

TEST_CASE("jump conditions hold at the plates") {
    const SpectralPoint sp = SpectralPoint::from_zeta_kperp(1.0, 0.0); // kappa = zeta = 1

    // vacuum plate: plain continuity of g and dg/dz, residuals are pure O(h)
    // stencil offsets that halve with h
    const Stack vac({Plate::magnetodielectric(0.0, 0.0, 0.0)});
    const auto [v0, d0] = check_jump_conditions(vac, 1, 2.0, Mode::H, sp, 1e-5);
    CHECK(v0 <= 1e-5);
    CHECK(d0 <= 1e-5);
    const auto [v0h, d0h] = check_jump_conditions(vac, 1, 2.0, Mode::H, sp, 5e-6);
    CHECK(v0 / v0h == doctest::Approx(2.0).epsilon(0.2));
    CHECK(d0 / d0h == doctest::Approx(2.0).epsilon(0.2));

    // electric plate, source far enough that the O(h) constant is small
    const Stack el({Plate::magnetodielectric(0.0, 2.0, 0.0)});
    const auto [v1, d1] = check_jump_conditions(el, 1, 6.0, Mode::H, sp, 1e-5);
    CHECK(v1 <= 1e-7);
    CHECK(d1 <= 1e-7);

    // first-order convergence in h
    const auto [v2, d2] = check_jump_conditions(el, 1, 6.0, Mode::H, sp, 1e-3);
    const auto [v3, d3] = check_jump_conditions(el, 1, 6.0, Mode::H, sp, 5e-4);
    CHECK(v2 / v3 == doctest::Approx(2.0).epsilon(0.25));
    CHECK(d2 / d3 == doctest::Approx(2.0).epsilon(0.25));

    // both couplings active, inside a three-plate stack, sources in every
    // region, both modes; O(h) convergence pins each matrix row
    const Stack triple({Plate::magnetodielectric(0.0, 2.0, 1.0),
                        Plate::magnetodielectric(1.0, 3.0, 4.0),
                        Plate::magnetodielectric(2.0, 0.5, 0.5)});
    const SpectralPoint spt = SpectralPoint::from_zeta_kperp(0.8, 0.9);
    for (Mode mode : {Mode::H, Mode::E}) {
        for (int i = 1; i <= 3; ++i) {
            const auto [v, d] = check_jump_conditions(triple, i, -2.5, mode, spt, 1e-5);
            CHECK(v <= 1e-6);
            CHECK(d <= 1e-6);
            for (double zp : {-2.5, 0.45, 1.55, 4.3}) {
                const auto [vc, dc] = check_jump_conditions(triple, i, zp, mode, spt, 1e-3);
                const auto [vf, df] = check_jump_conditions(triple, i, zp, mode, spt, 5e-4);
                CHECK(vc / vf == doctest::Approx(2.0).epsilon(0.3));
                CHECK(dc / df == doctest::Approx(2.0).epsilon(0.3));
            }
        }
    }

    CHECK_THROWS_AS(check_jump_conditions(el, 1, 0.0, Mode::H, sp, 1e-5), OnPlatePlane);
    CHECK_THROWS_AS(check_jump_conditions(el, 1, 1e-6, Mode::H, sp, 1e-5),
                    StraddlesPlateOrSource);
    const Stack ideal({Plate::perfect_e(0.0)});
    CHECK_THROWS_AS(check_jump_conditions(ideal, 1, 2.0, Mode::H, sp, 1e-5),
                    ValidationError);
}
