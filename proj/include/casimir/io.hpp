#pragma once

#include <string>
#include <vector>

#include "casimir/quadrature.hpp"
#include "casimir/stack.hpp"

namespace casimir::io {

struct PlateConfig {
    double position = 0.0;
    PlateKind kind = PlateKind::Magnetodielectric;
    double lambda_e = 0.0;
    double lambda_g = 0.0;
};

struct StackConfig {
    std::string unit_label; // documentation only, no conversions
    std::vector<PlateConfig> plates;

    Stack to_stack() const;
};

struct SweepRequest {
    int gap_index = 1; // gap between plates (i, i+1)
    double from = 0.0;
    double to = 0.0;
    int points = 0;
    bool log_scale = false;
};

// Parses and validates a stack configuration. Unsorted input is rejected,
// never silently sorted.
StackConfig parse_stack(const std::string& json_text);

std::string emit_stack(const StackConfig& config);

// JSON record with value, error_estimate, evaluations, path and the full
// input echo; numbers carry 17 significant digits.
std::string emit_energy_json(const EnergyResult& result, const StackConfig& input);
std::string emit_pressure_json(const PressureResult& result, const StackConfig& input,
                               int plate_index);

// Round-trip reader for emit_energy_json output.
EnergyResult parse_energy_result(const std::string& json_text);

struct SweepRow {
    double gap = 0.0;
    double energy_per_area = 0.0;
    double pressure = 0.0;
    double error_estimate = 0.0;
};

// Header gap,energy_per_area,pressure,error_estimate then one row per point;
// LF line endings.
std::string emit_sweep_csv(const std::vector<SweepRow>& rows);

std::string format_g17(double v);

} // namespace casimir::io
