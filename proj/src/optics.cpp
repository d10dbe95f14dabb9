#include "casimir/plate.hpp"

namespace casimir {

Plate Plate::lambda_swapped() const {
    Plate p = *this;
    switch (kind) {
    case PlateKind::PerfectE: p.kind = PlateKind::PerfectM; break;
    case PlateKind::PerfectM: p.kind = PlateKind::PerfectE; break;
    case PlateKind::Magnetodielectric:
        std::swap(p.lambda_e, p.lambda_g);
        if (response) {
            ResponseFn base = response;
            p.response = [base](double zeta) {
                auto [le, lg] = base(zeta);
                return std::make_pair(lg, le);
            };
        }
        break;
    }
    return p;
}

Coefficients coefficients(const Plate& plate, Mode mode, const SpectralPoint& sp) {
    if (!(sp.kappa > 0.0)) {
        throw NonPositiveKappa("coefficients: kappa must be positive");
    }

    switch (plate.kind) {
    case PlateKind::PerfectE:
        return mode == Mode::H ? Coefficients{1.0, 0.0} : Coefficients{-1.0, 0.0};
    case PlateKind::PerfectM:
        return mode == Mode::H ? Coefficients{-1.0, 0.0} : Coefficients{1.0, 0.0};
    case PlateKind::Magnetodielectric:
        break;
    }

    auto [le, lg] = plate.couplings_at(sp.zeta);
    if (mode == Mode::E) std::swap(le, lg); // H -> E swaps lambda_e <-> lambda_g

    const double z2 = sp.zeta * sp.zeta;
    const double qg = lg * z2 / (lg * z2 + 2.0 * sp.kappa);
    const double qe = le * sp.kappa / (le * sp.kappa + 2.0);
    return {qe - qg, 1.0 - qg - qe};
}

} // namespace casimir
