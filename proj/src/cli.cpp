#include "casimir/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "casimir/greens.hpp"
#include "casimir/io.hpp"
#include "casimir/kernels.hpp"
#include "casimir/quadrature.hpp"
#include "casimir/scattering.hpp"

namespace casimir::cli {

namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open stack file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json number17(double v) { return json::parse(io::format_g17(v)); }

struct CommonOpts {
    std::string stack_file;
    double rel_tol = 0.0; // 0 keeps the defaults
    int max_subdivisions = 0;
    std::string format = "json";
};

QuadratureSpec make_spec(const CommonOpts& opts) {
    QuadratureSpec spec;
    if (opts.rel_tol > 0.0) {
        spec.rel_tol = opts.rel_tol;
        spec.rel_tol_2d = opts.rel_tol;
    }
    if (opts.max_subdivisions > 0) spec.max_subdivisions = opts.max_subdivisions;
    return spec;
}

std::string chain_label(const std::vector<int>& chain, int n) {
    std::string line;
    for (std::size_t q = 0; q + 1 < chain.size(); ++q) {
        if (q > 0) line += "\xC2\xB7"; // middle dot
        line += "\xCE\x94";            // Greek Delta
        if (n <= 9) {
            line += std::to_string(chain[q]);
            line += std::to_string(chain[q + 1]);
        } else {
            line += "{" + std::to_string(chain[q]) + "," + std::to_string(chain[q + 1]) + "}";
        }
    }
    return line;
}

int cmd_energy(const CommonOpts& opts, std::ostream& out) {
    const io::StackConfig config = io::parse_stack(read_file(opts.stack_file));
    const Stack stack = config.to_stack();
    const EnergyResult result = energy_per_area(stack, make_spec(opts));
    if (opts.format == "csv") {
        out << "value,error_estimate,evaluations,path\n"
            << io::format_g17(result.value) << ',' << io::format_g17(result.error_estimate)
            << ',' << result.evaluations << ','
            << (result.path == IntegrationPath::KappaOnly1D ? "KappaOnly1D" : "General2D")
            << '\n';
    } else {
        out << io::emit_energy_json(result, config);
    }
    return 0;
}

int cmd_pressure(const CommonOpts& opts, int plate, bool stress, std::ostream& out) {
    const io::StackConfig config = io::parse_stack(read_file(opts.stack_file));
    const Stack stack = config.to_stack();
    const QuadratureSpec spec = make_spec(opts);
    PressureResult result;
    if (stress) {
        if (plate != stack.size()) {
            throw ValidationError("--stress computes the force on the rightmost plate");
        }
        if (stack.size() == 2) result = pressure_two_plates_stress(stack, spec);
        else if (stack.size() == 3) result = pressure_three_plates_stress(stack, spec);
        else throw ValidationError("--stress needs a 2- or 3-plate stack");
    } else {
        result = pressure_on_plate(stack, plate, spec);
    }
    json j = json::parse(io::emit_pressure_json(result, config, plate));
    j["method"] = stress ? "stress_tensor" : "energy_derivative";
    out << j.dump(2) << '\n';
    return 0;
}

int cmd_sweep(const CommonOpts& opts, const io::SweepRequest& req, std::ostream& out) {
    if (req.points < 2) throw ValidationError("sweep needs at least 2 points");
    if (!(req.from > 0.0) || !(req.to > req.from)) {
        throw ValidationError("sweep needs 0 < from < to");
    }
    const io::StackConfig config = io::parse_stack(read_file(opts.stack_file));
    const Stack base = config.to_stack();
    if (req.gap_index < 1 || req.gap_index >= base.size()) {
        throw ValidationError("sweep gap index out of range");
    }
    const QuadratureSpec spec = make_spec(opts);

    std::vector<io::SweepRow> rows;
    rows.reserve(static_cast<std::size_t>(req.points));
    for (int p = 0; p < req.points; ++p) {
        const double frac = static_cast<double>(p) / (req.points - 1);
        const double gap = req.log_scale
                               ? req.from * std::pow(req.to / req.from, frac)
                               : req.from + (req.to - req.from) * frac;
        // Shift every plate right of the gap so only this gap changes.
        const double shift = gap - base.gap(req.gap_index);
        std::vector<Plate> plates = base.plates();
        for (int i = req.gap_index; i < base.size(); ++i) {
            plates[static_cast<std::size_t>(i)].position += shift;
        }
        const Stack stack{std::move(plates)};
        const EnergyResult energy = energy_per_area(stack, spec);
        const PressureResult pressure = pressure_on_plate(stack, req.gap_index + 1, spec);
        rows.push_back({gap, energy.value, pressure.value, energy.error_estimate});
    }
    out << io::emit_sweep_csv(rows);
    return 0;
}

int cmd_coeffs(const CommonOpts& opts, double zeta, double kperp, std::ostream& out) {
    const io::StackConfig config = io::parse_stack(read_file(opts.stack_file));
    const Stack stack = config.to_stack();
    const SpectralPoint sp = SpectralPoint::from_zeta_kperp(zeta, kperp);

    json j;
    j["spectral_point"] = {{"zeta", number17(sp.zeta)},
                           {"kperp", number17(sp.kperp)},
                           {"kappa", number17(sp.kappa)}};
    j["plates"] = json::array();
    for (int i = 1; i <= stack.size(); ++i) {
        json entry;
        entry["index"] = i;
        for (Mode mode : {Mode::H, Mode::E}) {
            const Coefficients c = coefficients(stack.plate(i), mode, sp);
            entry[mode == Mode::H ? "H" : "E"] = {{"r", number17(c.r)}, {"t", number17(c.t)}};
        }
        j["plates"].push_back(entry);
    }
    for (Mode mode : {Mode::H, Mode::E}) {
        const CompositeCoefficients c = composite(stack, mode, sp);
        j["composite"][mode == Mode::H ? "H" : "E"] = {{"r_left", number17(c.r_left)},
                                                       {"r_right", number17(c.r_right)},
                                                       {"t", number17(c.t)},
                                                       {"delta", number17(c.delta)}};
    }
    out << j.dump(2) << '\n';
    return 0;
}

int cmd_diagram(int n, std::ostream& out) {
    for (const auto& chain : enumerate_chains(n)) {
        out << chain_label(chain, n) << '\n';
    }
    return 0;
}

int cmd_greens(const CommonOpts& opts, const std::string& mode_name, double zeta,
               double kperp, double z, double zprime, std::ostream& out) {
    const io::StackConfig config = io::parse_stack(read_file(opts.stack_file));
    const Stack stack = config.to_stack();
    const Mode mode = mode_name == "E" ? Mode::E : Mode::H;
    const SpectralPoint sp = SpectralPoint::from_zeta_kperp(zeta, kperp);
    const auto region = greens_region(stack, z, zprime);
    const double g = greens_value(stack, {z, zprime, mode, sp});
    json j;
    j["value"] = number17(g);
    j["region"] = {region.first, region.second};
    j["mode"] = mode_name;
    out << j.dump(2) << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// check: invariant suite on a user stack

struct CheckReport {
    bool all_pass = true;

    void result(std::ostream& out, const std::string& name, bool pass,
                const std::string& detail) {
        out << (pass ? "PASS " : "FAIL ") << name << ": " << detail << '\n';
        if (!pass) all_pass = false;
    }

    void skipped(std::ostream& out, const std::string& name, const std::string& why) {
        out << "SKIP " << name << ": " << why << '\n';
    }
};

std::vector<SpectralPoint> check_points() {
    std::vector<SpectralPoint> pts;
    for (double zeta : {0.1, 0.7, 1.6}) {
        for (double extra : {0.2, 1.1, 2.9}) {
            pts.push_back(SpectralPoint::from_zeta_kappa(zeta, zeta + extra));
        }
    }
    return pts;
}

double rel_diff(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

int cmd_check(const CommonOpts& opts, std::ostream& out) {
    const io::StackConfig config = io::parse_stack(read_file(opts.stack_file));
    const Stack stack = config.to_stack();
    const int n = stack.size();
    CheckReport report;

    if (n >= 2) {
        double worst = 0.0;
        for (const SpectralPoint& sp : check_points()) {
            for (Mode mode : {Mode::H, Mode::E}) {
                const double chain = delta_chain(stack, mode, sp);
                worst = std::max(worst, rel_diff(chain, composite(stack, mode, sp).delta));
                for (int split = 1; split < n; ++split) {
                    const double rl = composite(stack.slice(1, split), mode, sp).r_right;
                    const double rr = composite(stack.slice(split + 1, n), mode, sp).r_left;
                    const double dl = split >= 2 ? delta_chain(stack.slice(1, split), mode, sp) : 1.0;
                    const double dr = split + 1 < n ? delta_chain(stack.slice(split + 1, n), mode, sp) : 1.0;
                    const double u = std::exp(-sp.kappa * stack.gap(split));
                    worst = std::max(worst, rel_diff(chain, dl * dr * (1.0 - rl * u * rr * u)));
                }
            }
        }
        report.result(out, "factorization", worst <= 1e-12,
                      "max relative deviation " + io::format_g17(worst));
    } else {
        report.skipped(out, "factorization", "needs N >= 2");
    }

    if (n >= 2) {
        QuadratureSpec spec;
        spec.rel_tol = 1e-9;
        spec.rel_tol_2d = 1e-8;
        const double h = 1e-4 * stack.min_gap();
        double worst = 0.0;
        for (int i = 1; i <= n; ++i) {
            const double p = pressure_on_plate(stack, i, spec).value;
            const double a = stack.plate(i).position;
            const double ep = energy_per_area(stack.with_position(i, a + h), spec).value;
            const double em = energy_per_area(stack.with_position(i, a - h), spec).value;
            const double fd = -(ep - em) / (2.0 * h);
            const double scale = std::max({std::abs(p), std::abs(fd), 1e-12});
            worst = std::max(worst, std::abs(p - fd) / scale);
        }
        report.result(out, "force-energy", worst <= 1e-4,
                      "max relative deviation " + io::format_g17(worst));
    } else {
        report.skipped(out, "force-energy", "needs N >= 2");
    }

    {
        const Stack swapped = stack.lambda_swapped();
        double worst = 0.0;
        for (const SpectralPoint& sp : check_points()) {
            for (int i = 1; i <= n; ++i) {
                const Coefficients ce = coefficients(stack.plate(i), Mode::E, sp);
                const Coefficients ch = coefficients(swapped.plate(i), Mode::H, sp);
                worst = std::max(worst, std::abs(ce.r - ch.r) + std::abs(ce.t - ch.t));
            }
            if (n >= 2) {
                worst = std::max(worst, std::abs(delta_chain(stack, Mode::E, sp) -
                                                 delta_chain(swapped, Mode::H, sp)));
            }
        }
        report.result(out, "mode-swap", worst == 0.0,
                      "max deviation " + io::format_g17(worst));
    }

    if (n <= 3) {
        double worst = 0.0;
        const double lo = stack.plate(1).position;
        const double hi = stack.plate(n).position;
        const double pad = n >= 2 ? stack.min_gap() : 1.0;
        const double zs[4] = {lo - 0.73 * pad, lo + 0.41 * pad, hi - 0.29 * pad,
                              hi + 0.57 * pad};
        for (const SpectralPoint& sp : check_points()) {
            for (Mode mode : {Mode::H, Mode::E}) {
                for (double z : zs) {
                    for (double zp : zs) {
                        if (z == zp) continue;
                        const double g1 = greens_value(stack, {z, zp, mode, sp});
                        const double g2 = greens_value(stack, {zp, z, mode, sp});
                        worst = std::max(worst, rel_diff(g1, g2));
                    }
                }
            }
        }
        report.result(out, "reciprocity", worst <= 1e-12,
                      "max relative deviation " + io::format_g17(worst));
    } else {
        report.skipped(out, "reciprocity", "region matrices exist for N <= 3 only");
    }

    return report.all_pass ? 0 : 3;
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Casimir energies and pressures for stacks of delta-function plates"};
    app.require_subcommand(1);

    CommonOpts opts;
    io::SweepRequest sweep;
    int plate = 1;
    bool stress = false;
    int diagram_n = 2;
    std::string mode_name = "H";
    double zeta = 0.0, kperp = 0.0, z = 0.0, zprime = 0.0;

    auto add_common = [&opts](CLI::App* cmd, bool with_format) {
        cmd->add_option("--stack", opts.stack_file, "stack JSON file")->required();
        cmd->add_option("--rel-tol", opts.rel_tol, "relative quadrature tolerance");
        cmd->add_option("--max-subdivisions", opts.max_subdivisions,
                        "adaptive panel split budget");
        if (with_format) {
            cmd->add_option("--format", opts.format, "output format")
                ->check(CLI::IsMember({"json", "csv"}));
        }
    };

    CLI::App* energy = app.add_subcommand("energy", "Casimir energy per unit area");
    add_common(energy, true);

    CLI::App* pressure = app.add_subcommand("pressure", "force per unit area on a plate");
    add_common(pressure, false);
    pressure->add_option("--plate", plate, "1-based plate index")->required();
    pressure->add_flag("--stress", stress, "verbatim stress-tensor path (N=2,3 ideal)");

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "gap sweep of energy and pressure");
    add_common(sweep_cmd, false);
    sweep_cmd->add_option("--gap", sweep.gap_index, "1-based gap index")->required();
    sweep_cmd->add_option("--from", sweep.from, "first gap value")->required();
    sweep_cmd->add_option("--to", sweep.to, "last gap value")->required();
    sweep_cmd->add_option("--points", sweep.points, "number of points")->required();
    sweep_cmd->add_flag("--log", sweep.log_scale, "logarithmic spacing");

    CLI::App* coeffs = app.add_subcommand("coeffs", "per-plate and composite coefficients");
    add_common(coeffs, false);
    coeffs->add_option("--zeta", zeta, "Euclidean frequency")->required();
    coeffs->add_option("--kperp", kperp, "transverse wavenumber")->required();

    CLI::App* diagram = app.add_subcommand("diagram", "chain decomposition of Delta");
    diagram->add_option("--n", diagram_n, "number of plates")->required()
        ->check(CLI::Range(2, 16));

    CLI::App* greens = app.add_subcommand("greens", "Green's function value (N <= 3)");
    add_common(greens, false);
    greens->add_option("--mode", mode_name, "H or E")->check(CLI::IsMember({"H", "E"}));
    greens->add_option("--zeta", zeta, "Euclidean frequency")->required();
    greens->add_option("--kperp", kperp, "transverse wavenumber")->required();
    greens->add_option("--z", z, "observation point")->required();
    greens->add_option("--zprime", zprime, "source point")->required();

    CLI::App* check = app.add_subcommand("check", "run the invariant suite on a stack");
    add_common(check, false);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (energy->parsed()) return cmd_energy(opts, out);
        if (pressure->parsed()) return cmd_pressure(opts, plate, stress, out);
        if (sweep_cmd->parsed()) return cmd_sweep(opts, sweep, out);
        if (coeffs->parsed()) return cmd_coeffs(opts, zeta, kperp, out);
        if (diagram->parsed()) return cmd_diagram(diagram_n, out);
        if (greens->parsed()) return cmd_greens(opts, mode_name, zeta, kperp, z, zprime, out);
        if (check->parsed()) return cmd_check(opts, out);
    } catch (const QuadratureNotConverged& e) {
        err << "error: " << e.what() << " (best estimate " << io::format_g17(e.best_estimate)
            << " +- " << io::format_g17(e.error_estimate) << ")\n";
        return 2;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    err << "error: no subcommand\n";
    return 1;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    return dispatch(args, out, err);
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args, std::cout, std::cerr);
}

} // namespace casimir::cli
