#pragma once

#include <cmath>
#include <functional>
#include <utility>

#include "casimir/errors.hpp"

namespace casimir {

// The two decoupled scalar polarizations of planar geometry.
// H is the TM mode (magnetic Green's function), E the TE mode.
enum class Mode { H, E };

inline Mode other(Mode m) { return m == Mode::H ? Mode::E : Mode::H; }

// One point of the Euclidean spectral measure: imaginary frequency zeta,
// transverse wavenumber kperp, and the longitudinal decay constant
// kappa = sqrt(kperp^2 + zeta^2). Propagation over a distance l costs
// exp(-kappa*l).
struct SpectralPoint {
    double zeta = 0.0;
    double kperp = 0.0;
    double kappa = 0.0;

    static SpectralPoint from_zeta_kperp(double zeta, double kperp) {
        return {zeta, kperp, std::hypot(zeta, kperp)};
    }

    // kperp derived; requires kappa >= zeta.
    static SpectralPoint from_zeta_kappa(double zeta, double kappa) {
        if (kappa < zeta) {
            throw ValidationError("spectral point needs kappa >= zeta");
        }
        const double k2 = kappa * kappa - zeta * zeta;
        return {zeta, k2 > 0.0 ? std::sqrt(k2) : 0.0, kappa};
    }
};

enum class PlateKind { Magnetodielectric, PerfectE, PerfectM };

// Frequency-dependent couplings, evaluated on the imaginary axis.
// Returns {lambda_e(zeta), lambda_g(zeta)}.
using ResponseFn = std::function<std::pair<double, double>(double zeta)>;

// A single delta-function plate: transverse electric coupling lambda_e,
// magnetic coupling lambda_g, at position z. The ideal kinds are the
// lambda_e -> inf (PerfectE) and lambda_g -> inf (PerfectM) limits, kept
// as explicit variants so no huge coupling values ever enter arithmetic.
struct Plate {
    double position = 0.0;
    PlateKind kind = PlateKind::Magnetodielectric;
    double lambda_e = 0.0;
    double lambda_g = 0.0;
    ResponseFn response; // optional dispersion hook; empty means constants

    static Plate magnetodielectric(double position, double lambda_e, double lambda_g) {
        if (!(lambda_e >= 0.0) || !std::isfinite(lambda_e) ||
            !(lambda_g >= 0.0) || !std::isfinite(lambda_g)) {
            throw ValidationError("plate couplings must be finite and non-negative");
        }
        if (!std::isfinite(position)) throw ValidationError("plate position must be finite");
        Plate p;
        p.position = position;
        p.kind = PlateKind::Magnetodielectric;
        p.lambda_e = lambda_e;
        p.lambda_g = lambda_g;
        return p;
    }

    static Plate perfect_e(double position) {
        Plate p;
        p.position = position;
        p.kind = PlateKind::PerfectE;
        return p;
    }

    static Plate perfect_m(double position) {
        Plate p;
        p.position = position;
        p.kind = PlateKind::PerfectM;
        return p;
    }

    // Couplings at imaginary frequency zeta (consults the response hook).
    std::pair<double, double> couplings_at(double zeta) const {
        if (response) return response(zeta);
        return {lambda_e, lambda_g};
    }

    // True when r and t depend on kappa alone for both modes: the ideal
    // kinds and the bare vacuum plate.
    bool kappa_only() const {
        if (kind != PlateKind::Magnetodielectric) return true;
        return !response && lambda_e == 0.0 && lambda_g == 0.0;
    }

    // Same plate with lambda_e and lambda_g interchanged (PerfectE <-> PerfectM).
    Plate lambda_swapped() const;
};

struct Coefficients {
    double r = 0.0;
    double t = 1.0;
};

// Reflection and transmission amplitudes of a single plate at one spectral
// point. For mode H on a magnetodielectric plate,
//   r = -lg z^2/(lg z^2 + 2k) + le k/(le k + 2),
//   t = 1 - lg z^2/(lg z^2 + 2k) - le k/(le k + 2),
// and mode E uses the same expressions with le and lg interchanged.
Coefficients coefficients(const Plate& plate, Mode mode, const SpectralPoint& sp);

} // namespace casimir
