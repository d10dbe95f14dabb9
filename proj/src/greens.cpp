#include "casimir/greens.hpp"

#include <cmath>

#include "casimir/scattering.hpp"

namespace casimir {

namespace {

// Symbolic region-entry term for the hand-assembled N <= 3 tables. Factor
// codes: 1..3 are r_1..r_3, 11..13 are t_1..t_3, 0 ends the list. num picks
// an optional sub-determinant numerator; the denominator is always the full
// Delta of the stack (for N = 1 both are absent). The pathlength is
// na * gap_12 + nb * gap_23.
struct Sym {
    int f[5];
    int num; // 0: none, 12: Delta_12, 23: Delta_23, 99: full Delta (cancels)
    double na;
    double nb;
    int src;
    int obs;
};

struct SymTable {
    int n = 0;
    std::vector<std::vector<std::vector<Sym>>> entries;

    SymTable(int n_plates) : n(n_plates) {
        const std::size_t regions = static_cast<std::size_t>(n) + 1;
        entries.assign(regions, std::vector<std::vector<Sym>>(regions));
    }

    void add(int i, int j, Sym s) {
        entries[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)].push_back(s);
    }
};

const SymTable& table_n1() {
    static const SymTable t = [] {
        SymTable t(1);
        t.add(1, 1, {{11, 0}, 0, 0, 0, 1, 1});
        t.add(1, 2, {{1, 0}, 0, 0, 0, 1, 1});
        t.add(2, 1, {{1, 0}, 0, 0, 0, 1, 1});
        t.add(2, 2, {{11, 0}, 0, 0, 0, 1, 1});
        return t;
    }();
    return t;
}

const SymTable& table_n2() {
    static const SymTable t = [] {
        SymTable t(2);
        t.add(1, 1, {{11, 12, 0}, 0, 1, 0, 2, 1});
        t.add(1, 2, {{12, 0}, 0, 0, 0, 2, 2});
        t.add(1, 2, {{1, 12, 0}, 0, 1, 0, 2, 1});
        t.add(1, 3, {{2, 0}, 99, 0, 0, 2, 2});
        t.add(1, 3, {{12, 12, 1, 0}, 0, 2, 0, 2, 2});
        t.add(2, 1, {{11, 0}, 0, 0, 0, 1, 1});
        t.add(2, 1, {{11, 2, 0}, 0, 1, 0, 2, 1});
        t.add(2, 2, {{1, 0}, 0, 0, 0, 1, 1});
        t.add(2, 2, {{1, 2, 0}, 0, 1, 0, 2, 1});
        t.add(2, 2, {{2, 0}, 0, 0, 0, 2, 2});
        t.add(2, 2, {{1, 2, 0}, 0, 1, 0, 1, 2});
        t.add(2, 3, {{12, 0}, 0, 0, 0, 2, 2});
        t.add(2, 3, {{1, 12, 0}, 0, 1, 0, 1, 2});
        t.add(3, 1, {{1, 0}, 99, 0, 0, 1, 1});
        t.add(3, 1, {{11, 11, 2, 0}, 0, 2, 0, 1, 1});
        t.add(3, 2, {{11, 0}, 0, 0, 0, 1, 1});
        t.add(3, 2, {{2, 11, 0}, 0, 1, 0, 1, 2});
        t.add(3, 3, {{12, 11, 0}, 0, 1, 0, 1, 2});
        return t;
    }();
    return t;
}

const SymTable& table_n3() {
    static const SymTable t = [] {
        SymTable t(3);
        t.add(1, 1, {{11, 12, 13, 0}, 0, 1, 1, 3, 1});

        t.add(1, 2, {{12, 13, 0}, 0, 0, 1, 3, 2});
        t.add(1, 2, {{1, 12, 13, 0}, 0, 1, 1, 3, 1});

        t.add(1, 3, {{13, 0}, 12, 0, 0, 3, 3});
        t.add(1, 3, {{2, 13, 0}, 12, 0, 1, 3, 2});
        t.add(1, 3, {{12, 1, 12, 13, 0}, 0, 2, 1, 3, 2});

        t.add(1, 4, {{3, 0}, 99, 0, 0, 3, 3});
        t.add(1, 4, {{13, 2, 13, 0}, 12, 0, 2, 3, 3});
        t.add(1, 4, {{13, 12, 1, 12, 13}, 0, 2, 2, 3, 3});

        t.add(2, 1, {{11, 12, 0}, 0, 1, 0, 2, 1});
        t.add(2, 1, {{11, 12, 3, 0}, 0, 1, 1, 3, 1});

        t.add(2, 2, {{12, 0}, 0, 0, 0, 2, 2});
        t.add(2, 2, {{12, 3, 0}, 0, 0, 1, 3, 2});
        t.add(2, 2, {{1, 12, 0}, 0, 1, 0, 2, 1});
        t.add(2, 2, {{1, 12, 3, 0}, 0, 1, 1, 3, 1});

        t.add(2, 3, {{3, 0}, 12, 0, 0, 3, 3});
        t.add(2, 3, {{3, 2, 0}, 12, 0, 1, 2, 3});
        t.add(2, 3, {{3, 12, 1, 12, 0}, 0, 2, 1, 2, 3});
        t.add(2, 3, {{1, 12, 12, 3, 0}, 0, 2, 1, 3, 2});
        t.add(2, 3, {{2, 3, 0}, 12, 0, 1, 3, 2});
        t.add(2, 3, {{2, 0}, 12, 0, 0, 2, 2});
        t.add(2, 3, {{12, 1, 12, 0}, 0, 2, 0, 2, 2});

        t.add(2, 4, {{13, 0}, 12, 0, 0, 3, 3});
        t.add(2, 4, {{13, 2, 0}, 12, 0, 1, 2, 3});
        t.add(2, 4, {{13, 12, 1, 12, 0}, 0, 2, 1, 2, 3});

        t.add(3, 1, {{11, 0}, 23, 0, 0, 1, 1});
        t.add(3, 1, {{11, 2, 0}, 23, 1, 0, 2, 1});
        t.add(3, 1, {{11, 12, 3, 12, 0}, 0, 1, 2, 2, 1});

        t.add(3, 2, {{1, 0}, 23, 0, 0, 1, 1});
        t.add(3, 2, {{1, 2, 0}, 23, 1, 0, 2, 1});
        t.add(3, 2, {{1, 12, 3, 12, 0}, 0, 1, 2, 2, 1});
        t.add(3, 2, {{12, 3, 12, 1, 0}, 0, 1, 2, 1, 2});
        t.add(3, 2, {{2, 1, 0}, 23, 1, 0, 1, 2});
        t.add(3, 2, {{2, 0}, 23, 0, 0, 2, 2});
        t.add(3, 2, {{12, 3, 12, 0}, 0, 0, 2, 2, 2});

        t.add(3, 3, {{12, 0}, 0, 0, 0, 2, 2});
        t.add(3, 3, {{12, 1, 0}, 0, 1, 0, 1, 2});
        t.add(3, 3, {{3, 12, 0}, 0, 0, 1, 2, 3});
        t.add(3, 3, {{3, 12, 1, 0}, 0, 1, 1, 1, 3});

        t.add(3, 4, {{13, 12, 0}, 0, 0, 1, 2, 3});
        t.add(3, 4, {{13, 12, 1, 0}, 0, 1, 1, 1, 3});

        t.add(4, 1, {{1, 0}, 99, 0, 0, 1, 1});
        t.add(4, 1, {{11, 2, 11, 0}, 23, 2, 0, 1, 1});
        t.add(4, 1, {{11, 12, 3, 12, 11}, 0, 2, 2, 1, 1});

        t.add(4, 2, {{11, 0}, 23, 0, 0, 1, 1});
        t.add(4, 2, {{2, 11, 0}, 23, 1, 0, 1, 2});
        t.add(4, 2, {{12, 3, 12, 11, 0}, 0, 1, 2, 1, 2});

        t.add(4, 3, {{12, 11, 0}, 0, 1, 0, 1, 2});
        t.add(4, 3, {{3, 12, 11, 0}, 0, 1, 1, 1, 3});

        t.add(4, 4, {{13, 12, 11, 0}, 0, 1, 1, 1, 3});
        return t;
    }();
    return t;
}

const SymTable& table_for(int n) {
    switch (n) {
    case 1: return table_n1();
    case 2: return table_n2();
    case 3: return table_n3();
    default: throw UnsupportedN("region matrices exist for N <= 3 only");
    }
}

} // namespace

double RegionMatrix::entry_value(int i, int j, double kappa) const {
    double sum = 0.0;
    for (const PathTerm& term : entry(i, j)) {
        sum += term.amplitude * std::exp(-kappa * term.pathlength);
    }
    return sum;
}

RegionMatrix region_matrix(const Stack& stack, Mode mode, const SpectralPoint& sp) {
    const int n = stack.size();
    const SymTable& table = table_for(n);

    double r[4] = {0, 0, 0, 0};
    double tt[4] = {0, 0, 0, 0};
    for (int i = 1; i <= n; ++i) {
        const Coefficients c = coefficients(stack.plate(i), mode, sp);
        r[i] = c.r;
        tt[i] = c.t;
    }
    const double gap_a = n >= 2 ? stack.gap(1) : 0.0;
    const double gap_b = n >= 3 ? stack.gap(2) : 0.0;
    const double d12 = n >= 2 ? delta_nn(stack, 1, mode, sp) : 1.0;
    const double d23 = n >= 3 ? delta_nn(stack, 2, mode, sp) : 1.0;
    const double dfull = n >= 2 ? delta_chain(stack, mode, sp) : 1.0;

    std::vector<std::vector<std::vector<PathTerm>>> entries(
        static_cast<std::size_t>(n + 1),
        std::vector<std::vector<PathTerm>>(static_cast<std::size_t>(n + 1)));

    for (int i = 1; i <= n + 1; ++i) {
        for (int j = 1; j <= n + 1; ++j) {
            const auto& syms =
                table.entries[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
            auto& out = entries[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)];
            out.reserve(syms.size());
            for (const Sym& s : syms) {
                double amp = 1.0;
                for (int q = 0; q < 5 && s.f[q] != 0; ++q) {
                    const int code = s.f[q];
                    amp *= code > 10 ? tt[code - 10] : r[code];
                }
                switch (s.num) {
                case 12: amp *= d12; break;
                case 23: amp *= d23; break;
                case 99: amp *= dfull; break;
                default: break;
                }
                amp /= dfull;
                out.push_back({amp, s.na * gap_a + s.nb * gap_b, s.src, s.obs});
            }
        }
    }
    return RegionMatrix(n, std::move(entries));
}

std::pair<int, int> greens_region(const Stack& stack, double z, double zprime) {
    const int n = stack.size();
    if (n > 3) throw UnsupportedN("region matrices exist for N <= 3 only");
    int rz = 1;
    int rzp = 1;
    for (int i = 1; i <= n; ++i) {
        const double a = stack.plate(i).position;
        if (z == a || zprime == a) throw OnPlatePlane("evaluation point on a plate plane");
        if (z > a) ++rz;
        if (zprime > a) ++rzp;
    }
    return {n + 2 - rzp, rz};
}

double greens_value(const Stack& stack, const GreensQuery& q) {
    const auto [i, j] = greens_region(stack, q.z, q.zprime);
    const RegionMatrix mat = region_matrix(stack, q.mode, q.sp);
    const double kappa = q.sp.kappa;

    double sum = 0.0;
    for (const PathTerm& term : mat.entry(i, j)) {
        const double dist = term.pathlength +
                            std::abs(q.z - stack.plate(term.obs_plane).position) +
                            std::abs(q.zprime - stack.plate(term.src_plane).position);
        sum += term.amplitude * std::exp(-kappa * dist);
    }
    if (mat.has_free_term(i, j)) {
        sum += std::exp(-kappa * std::abs(q.z - q.zprime));
    }
    return sum / (2.0 * kappa);
}

double check_ode_residual(const Stack& stack, const GreensQuery& q, double h) {
    if (!(h > 0.0)) throw ValidationError("step must be positive");
    for (int i = 1; i <= stack.size(); ++i) {
        const double a = stack.plate(i).position;
        if (std::abs(q.z - a) <= h) {
            throw StraddlesPlateOrSource("stencil straddles a plate plane");
        }
    }
    if (std::abs(q.z - q.zprime) <= h) {
        throw StraddlesPlateOrSource("stencil straddles the source point");
    }
    GreensQuery qp = q;
    GreensQuery qm = q;
    qp.z = q.z + h;
    qm.z = q.z - h;
    const double g0 = greens_value(stack, q);
    const double gp = greens_value(stack, qp);
    const double gm = greens_value(stack, qm);
    const double d2 = (gp - 2.0 * g0 + gm) / (h * h);
    return std::abs(-d2 + q.sp.kappa * q.sp.kappa * g0);
}

std::pair<double, double> check_jump_conditions(const Stack& stack, int i, double zprime,
                                                Mode mode, const SpectralPoint& sp,
                                                double h) {
    if (i < 1 || i > stack.size()) throw IndexOutOfRange("plate index out of range");
    if (!(h > 0.0)) throw ValidationError("step must be positive");
    const Plate& plate = stack.plate(i);
    if (plate.kind != PlateKind::Magnetodielectric) {
        throw ValidationError("jump conditions need finite couplings");
    }
    const double a = plate.position;
    if (zprime == a) throw OnPlatePlane("source on the plate plane");
    if (std::abs(zprime - a) <= 2.0 * h) {
        throw StraddlesPlateOrSource("source too close to the plate for the stencil");
    }
    for (int p = 1; p <= stack.size(); ++p) {
        if (p != i && std::abs(stack.plate(p).position - a) <= 2.0 * h) {
            throw StraddlesPlateOrSource("neighbouring plate inside the stencil");
        }
    }

    auto g = [&](double z) {
        return greens_value(stack, {z, zprime, mode, sp});
    };
    const double gp = g(a + h);
    const double gpp = g(a + 2.0 * h);
    const double gm = g(a - h);
    const double gmm = g(a - 2.0 * h);
    const double dp = (gpp - gp) / h; // one-sided, first order
    const double dm = (gm - gmm) / h;

    auto [le, lg] = plate.couplings_at(sp.zeta);
    if (mode == Mode::E) std::swap(le, lg);

    const double value_residual = std::abs((gp - gm) - 0.5 * le * (dp + dm));
    const double z2 = sp.zeta * sp.zeta;
    const double deriv_residual = std::abs((dp - dm) - 0.5 * z2 * lg * (gp + gm));
    return {value_residual, deriv_residual};
}

} // namespace casimir
