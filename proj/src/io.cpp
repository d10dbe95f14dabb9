#include "casimir/io.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace casimir::io {

using nlohmann::json;

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Stack StackConfig::to_stack() const {
    std::vector<Plate> out;
    out.reserve(plates.size());
    for (const PlateConfig& p : plates) {
        switch (p.kind) {
        case PlateKind::PerfectE: out.push_back(Plate::perfect_e(p.position)); break;
        case PlateKind::PerfectM: out.push_back(Plate::perfect_m(p.position)); break;
        case PlateKind::Magnetodielectric:
            out.push_back(Plate::magnetodielectric(p.position, p.lambda_e, p.lambda_g));
            break;
        }
    }
    return Stack(std::move(out));
}

namespace {

double require_finite_number(const json& j, const std::string& what) {
    if (!j.is_number()) throw ValidationError(what + " must be a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ValidationError(what + " must be finite");
    return v;
}

PlateConfig parse_plate(const json& j, std::size_t index) {
    const std::string where = "plates[" + std::to_string(index) + "]";
    if (!j.is_object()) throw ValidationError(where + " must be an object");
    if (!j.contains("position")) throw ValidationError(where + " is missing \"position\"");

    PlateConfig p;
    p.position = require_finite_number(j.at("position"), where + ".position");

    const bool has_ideal = j.contains("ideal");
    const bool has_lambda = j.contains("lambda_e") || j.contains("lambda_g");
    if (has_ideal && has_lambda) {
        throw ValidationError(where + " mixes \"ideal\" with lambda couplings");
    }
    if (has_ideal) {
        const std::string kind = j.at("ideal").is_string() ? j.at("ideal").get<std::string>() : "";
        if (kind == "perfect_e") p.kind = PlateKind::PerfectE;
        else if (kind == "perfect_m") p.kind = PlateKind::PerfectM;
        else throw ValidationError(where + ".ideal must be \"perfect_e\" or \"perfect_m\"");
        return p;
    }
    if (!j.contains("lambda_e") || !j.contains("lambda_g")) {
        throw ValidationError(where + " needs lambda_e and lambda_g (or \"ideal\")");
    }
    p.lambda_e = require_finite_number(j.at("lambda_e"), where + ".lambda_e");
    p.lambda_g = require_finite_number(j.at("lambda_g"), where + ".lambda_g");
    if (p.lambda_e < 0.0) throw ValidationError(where + ".lambda_e must be non-negative");
    if (p.lambda_g < 0.0) throw ValidationError(where + ".lambda_g must be non-negative");
    return p;
}

json plate_to_json(const PlateConfig& p) {
    json j;
    j["position"] = p.position;
    switch (p.kind) {
    case PlateKind::PerfectE: j["ideal"] = "perfect_e"; break;
    case PlateKind::PerfectM: j["ideal"] = "perfect_m"; break;
    case PlateKind::Magnetodielectric:
        j["lambda_e"] = p.lambda_e;
        j["lambda_g"] = p.lambda_g;
        break;
    }
    return j;
}

json stack_to_json(const StackConfig& config) {
    json j;
    if (!config.unit_label.empty()) j["unit_label"] = config.unit_label;
    j["plates"] = json::array();
    for (const PlateConfig& p : config.plates) j["plates"].push_back(plate_to_json(p));
    return j;
}

const char* path_name(IntegrationPath path) {
    return path == IntegrationPath::KappaOnly1D ? "KappaOnly1D" : "General2D";
}

// nlohmann prints shortest round-trip doubles already; rendering through
// %.17g keeps the output contract uniform with the CSV writer. JSON has no
// non-finite literals, so those fall back to null.
json number17(double v) {
    if (!std::isfinite(v)) return json(v);
    return json::parse(format_g17(v));
}

} // namespace

StackConfig parse_stack(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("stack JSON: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("stack config must be a JSON object");
    if (!j.contains("plates") || !j.at("plates").is_array()) {
        throw ValidationError("stack config needs a \"plates\" array");
    }
    StackConfig config;
    if (j.contains("unit_label")) {
        if (!j.at("unit_label").is_string()) throw ValidationError("unit_label must be a string");
        config.unit_label = j.at("unit_label").get<std::string>();
    }
    const json& plates = j.at("plates");
    if (plates.empty()) throw ValidationError("stack needs at least one plate");
    for (std::size_t i = 0; i < plates.size(); ++i) {
        config.plates.push_back(parse_plate(plates[i], i));
    }
    for (std::size_t i = 0; i + 1 < config.plates.size(); ++i) {
        if (config.plates[i].position == config.plates[i + 1].position) {
            throw ValidationError("plates[" + std::to_string(i + 1) + "] duplicates the previous position");
        }
        if (config.plates[i].position > config.plates[i + 1].position) {
            throw ValidationError("plates[" + std::to_string(i + 1) +
                                  "] breaks the increasing position order");
        }
    }
    return config;
}

std::string emit_stack(const StackConfig& config) {
    return stack_to_json(config).dump(2) + "\n";
}

std::string emit_energy_json(const EnergyResult& result, const StackConfig& input) {
    json j;
    j["value"] = number17(result.value);
    j["error_estimate"] = number17(result.error_estimate);
    j["evaluations"] = result.evaluations;
    j["path"] = path_name(result.path);
    j["input"] = stack_to_json(input);
    return j.dump(2) + "\n";
}

std::string emit_pressure_json(const PressureResult& result, const StackConfig& input,
                               int plate_index) {
    json j;
    j["value"] = number17(result.value);
    j["error_estimate"] = number17(result.error_estimate);
    j["evaluations"] = result.evaluations;
    j["path"] = path_name(result.path);
    j["plate"] = plate_index;
    j["sign_convention"] = "+ = pushed toward larger z";
    j["input"] = stack_to_json(input);
    return j.dump(2) + "\n";
}

EnergyResult parse_energy_result(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("result JSON: ") + e.what());
    }
    EnergyResult r;
    r.value = j.at("value").get<double>();
    r.error_estimate = j.at("error_estimate").get<double>();
    r.evaluations = j.at("evaluations").get<long>();
    r.path = j.at("path").get<std::string>() == "KappaOnly1D" ? IntegrationPath::KappaOnly1D
                                                              : IntegrationPath::General2D;
    return r;
}

std::string emit_sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "gap,energy_per_area,pressure,error_estimate\n";
    for (const SweepRow& row : rows) {
        out += format_g17(row.gap);
        out += ',';
        out += format_g17(row.energy_per_area);
        out += ',';
        out += format_g17(row.pressure);
        out += ',';
        out += format_g17(row.error_estimate);
        out += '\n';
    }
    return out;
}

} // namespace casimir::io
