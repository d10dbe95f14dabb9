#pragma once

#include <functional>

#include "casimir/stack.hpp"

namespace casimir {

enum class Substitution { ExpMap, RationalMap };

// Tolerances and budgets for the adaptive integrator. rel_tol governs 1D
// (kappa-only) integrals, rel_tol_2d the general two-variable measure.
struct QuadratureSpec {
    double rel_tol = 1e-9;
    double rel_tol_2d = 1e-7;
    double abs_tol = 1e-18;
    int max_subdivisions = 4000;
    Substitution substitution = Substitution::ExpMap;
    bool force_general_2d = false; // test hook: run ideal stacks on the 2D path
};

enum class IntegrationPath { KappaOnly1D, General2D };

struct EnergyResult {
    double value = 0.0;          // energy per unit area, (unit)^-3
    double error_estimate = 0.0;
    long evaluations = 0;
    IntegrationPath path = IntegrationPath::KappaOnly1D;
};

struct PressureResult {
    double value = 0.0;          // force per unit area, (unit)^-4; + pushes toward larger z
    double error_estimate = 0.0;
    long evaluations = 0;
    IntegrationPath path = IntegrationPath::KappaOnly1D;
};

struct IntegralEstimate {
    double value = 0.0;
    double error = 0.0;
    long evaluations = 0;
};

// Adaptive Gauss-Kronrod integration of f over (lower, inf) after the
// variable substitution chosen in spec; decay_scale should match the
// integrand's exponential decay length. Endpoints are never evaluated.
IntegralEstimate integrate_semi_infinite(const std::function<double(double)>& f,
                                         double lower, const QuadratureSpec& spec,
                                         double decay_scale = 1.0);

// Casimir energy per unit area of the whole stack:
//   (1/4pi^2) Int_0^inf dzeta Int_zeta^inf kappa dkappa [ln D^H + ln D^E],
// collapsing to (1/4pi^2) Int kappa^2 [ln D^H + ln D^E] dkappa when every
// coefficient is kappa-only. The result records which path ran.
EnergyResult energy_per_area(const Stack& stack, const QuadratureSpec& spec = {});

// Interaction energy of two disjoint bodies a junction gap apart, from the
// two-body formula ln(1 - R^< u^2 R^>) under the same measure.
EnergyResult interaction_energy(const Stack& left, const Stack& right, double gap,
                                const QuadratureSpec& spec = {});

// Force per unit area on plate i, from the analytic derivative of ln Delta
// with respect to the plate position, integrated under the energy measure.
PressureResult pressure_on_plate(const Stack& stack, int i,
                                 const QuadratureSpec& spec = {});

// Verbatim stress-tensor pressure on the rightmost plate of a two-plate
// stack: -(1/2pi^2) Int kappa^3 [r1 r2 e^{-2ka}/D^H + (E term)] dkappa.
// Requires kappa-only plates.
PressureResult pressure_two_plates_stress(const Stack& stack,
                                          const QuadratureSpec& spec = {});

// The three-plate analogue (force on plate 3), four-term integrand with
// D12/D123 and r1 t2^2 r3 pieces. Requires kappa-only plates.
PressureResult pressure_three_plates_stress(const Stack& stack,
                                            const QuadratureSpec& spec = {});

} // namespace casimir
