#include "cli.hpp"

#include "cli_config.hpp"

#include "degen/errors.hpp"
#include "degen/spectra.hpp"
#include "degen/verify.hpp"
#include "degen/wellscape.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>

namespace degen::cli {
namespace {

using nlohmann::json;

struct Outcome {
    std::string text;
    int code = kSuccess;
};

std::string format_of(const RunConfig& cfg, const char* fallback) {
    const std::string f = cfg.format.value_or(fallback);
    if (f != "csv" && f != "json") throw ParameterError("--format must be csv or json");
    return f;
}

json metric(const MetricCheck& m) { return {{"value", m.value}, {"threshold", m.threshold}, {"pass", m.pass()}}; }

json property(const PropertyCheck& p) {
    return {{"value", p.holds}, {"threshold", true}, {"pass", p.holds}, {"applicable", p.applicable}};
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void apply_pair_defaults(RunConfig& cfg) {
    // Bare invocations build the volcano with nu = 1, A1 = 1/144.
    if (cfg.family == "sech-power" && !cfg.a1 && !cfg.gamma) cfg.a1 = "1/144";
}

Outcome cmd_construct(RunConfig cfg) {
    const std::string format = format_of(cfg, "csv");
    apply_pair_defaults(cfg);
    const auto pair = pair_from(cfg, grid_from(cfg, 6.0, 2001));
    const auto v = pair.potential();

    if (format == "json") {
        json j{{"family", pair.profile.family_name()},
               {"gamma", pair.config.gamma},
               {"b", pair.config.b_coeff},
               {"energy", pair.energy},
               {"wronskian_const", pair.wronskian_const},
               {"x", pair.grid},
               {"v", v},
               {"psi_plus", pair.psi_plus},
               {"psi_minus", pair.psi_minus}};
        return {j.dump(2) + "\n"};
    }
    const std::vector<std::string> header{"x", "v", "psi_plus", "psi_minus", "energy"};
    const std::vector<std::vector<double>> cols{pair.grid, v, pair.psi_plus, pair.psi_minus,
                                                std::vector<double>(pair.grid.size(), pair.energy)};
    return {csv_table(header, cols)};
}

Outcome cmd_verify(RunConfig cfg) {
    const std::string format = format_of(cfg, "json");
    apply_pair_defaults(cfg);
    auto pair = pair_from(cfg, grid_from(cfg, 8.0, 4001));
    if (cfg.inject_fault) pair = with_potential_fault(std::move(pair), pair.origin_index(), cfg.fault_size);

    const auto r = run_verification(pair);
    const double expected_w = std::abs(pair.config.b_coeff) * pair.config.gamma;
    json j{{"residual_max_plus", metric(r.residual_plus)},
           {"residual_max_minus", metric(r.residual_minus)},
           {"wronskian_drift", metric(r.wronskian_drift)},
           {"wronskian_value",
            {{"value", r.wronskian_at_origin},
             {"threshold", expected_w},
             {"relative_error", r.wronskian_value.value},
             {"tolerance", r.wronskian_value.threshold},
             {"pass", r.wronskian_value.pass()}}},
           {"interlace_ok", property(r.interlacing)},
           {"orthogonality", metric(r.orthogonality)},
           {"node_spacing_monotone", property(r.node_spacing)},
           {"slope_growth", property(r.slope_growth)},
           {"onset", r.onset},
           {"witness",
            {{"zeros_plus", r.zeros_plus},
             {"zeros_minus", r.zeros_minus},
             {"node_gaps", r.node_spacing.witness},
             {"slopes_at_nodes", r.slope_growth.witness}}},
           {"pass", r.all_pass()}};

    Outcome o;
    o.code = r.all_pass() ? kSuccess : kCheckFailed;
    if (format == "json") {
        o.text = j.dump(2) + "\n";
        return o;
    }
    o.text = "check,value,threshold,pass\n";
    for (const char* key : {"residual_max_plus", "residual_max_minus", "wronskian_drift", "orthogonality"}) {
        o.text += std::string(key) + "," + format_double(j[key]["value"].get<double>()) + "," +
                  format_double(j[key]["threshold"].get<double>()) + "," +
                  (j[key]["pass"].get<bool>() ? "true" : "false") + "\n";
    }
    o.text += "wronskian_value," + format_double(r.wronskian_at_origin) + "," + format_double(expected_w) + "," +
              (r.wronskian_value.pass() ? "true" : "false") + "\n";
    for (const char* key : {"interlace_ok", "node_spacing_monotone", "slope_growth"}) {
        const bool v = j[key]["value"].get<bool>();
        o.text += std::string(key) + "," + (v ? "true" : "false") + ",true," + (v ? "true" : "false") + "\n";
    }
    return o;
}

json well_json(const WellReport& r) {
    json j{{"a", r.a},
           {"gamma_sq", r.gamma_sq},
           {"regime", std::string(regime_name(r.regime))},
           {"z_root", optional_number(r.z_root)},
           {"x_maxima", r.x_maxima ? json::array({r.x_maxima->first, r.x_maxima->second}) : json(nullptr)},
           {"barrier_height_rel", optional_number(r.barrier_height_rel)},
           {"barrier_direct", optional_number(r.barrier_direct)},
           {"thresholds", {{"well_formation", r.thresholds.well_formation}, {"placement", r.thresholds.placement}}}};
    return j;
}

std::string well_csv_row(const WellReport& r) {
    const auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    return format_double(r.gamma_sq) + "," + std::string(regime_name(r.regime)) + "," + opt(r.z_root) + "," +
           (r.x_maxima ? format_double(r.x_maxima->second) : std::string()) + "," + opt(r.barrier_height_rel) +
           "\n";
}

Outcome cmd_wellscape(const RunConfig& cfg) {
    if (cfg.sweep_gamma_sq) {
        const std::string format = format_of(cfg, "csv");
        const auto grid = parse_list(*cfg.sweep_gamma_sq, "--sweep-gamma-sq");
        const auto reports = classify_sweep(cfg.a, grid);
        if (format == "json") {
            json arr = json::array();
            for (const auto& r : reports) arr.push_back(well_json(r));
            return {arr.dump(2) + "\n"};
        }
        std::string text = "gamma_sq,regime,z,x_max,barrier\n";
        for (const auto& r : reports) text += well_csv_row(r);
        return {text};
    }

    if (cfg.gamma && cfg.gamma_sq) throw ParameterError("--gamma and --gamma-sq are mutually exclusive");
    if (!cfg.gamma && !cfg.gamma_sq) throw ParameterError("wellscape needs --gamma, --gamma-sq or --sweep-gamma-sq");
    const auto report = cfg.gamma_sq ? solve_maxima_sq(cfg.a, parse_number(*cfg.gamma_sq, "--gamma-sq"))
                                     : solve_maxima(cfg.a, parse_number(*cfg.gamma, "--gamma"));
    if (format_of(cfg, "json") == "csv")
        return {"gamma_sq,regime,z,x_max,barrier\n" + well_csv_row(report)};
    return {well_json(report).dump(2) + "\n"};
}

json spectrum_json(const SpectrumResult& s) {
    return {{"eigenvalues", s.eigenvalues}, {"empty", s.empty}, {"splitting", optional_number(s.splitting)}};
}

Outcome cmd_spectrum(RunConfig cfg) {
    const std::string format = format_of(cfg, "json");
    if (cfg.parity != "even" && cfg.parity != "odd" && cfg.parity != "both")
        throw ParameterError("--parity must be even, odd or both");
    if (!(cfg.tol_e > 0.0)) throw ParameterError("--tol-e must be positive");

    BoxProblem prob;
    prob.step = cfg.step;
    prob.parity = cfg.parity == "odd" ? Parity::Odd : Parity::Even;
    std::optional<double> e_ref;

    if (cfg.potential == "free") {
        if (!cfg.half_width || !cfg.e_lo || !cfg.e_hi)
            throw ParameterError("free box needs --L, --e-lo and --e-hi");
        prob.potential = [](double) { return 0.0; };
        prob.half_width = *cfg.half_width;
    } else if (cfg.potential == "pair") {
        apply_pair_defaults(cfg);
        const auto pc = pair_config_from(cfg);
        const auto profile = cfg.a1 ? make_profile(SechPower{cfg.nu}) : profile_from(cfg);
        prob.potential = potential_function(profile, pc);
        e_ref = pair_energy(profile, pc);
        if (cfg.half_width) {
            prob.half_width = *cfg.half_width;
        } else {
            if (cfg.node_index < 0) throw ParameterError("--node-index must be >= 0");
            const double m = cfg.node_index;
            const double target = (cfg.parity == "odd" ? m + 1.0 : m + 0.5) * std::numbers::pi;
            prob.half_width = node_position(profile, pc.gamma, target);
        }
    } else {
        throw ParameterError("--potential must be free or pair");
    }

    double lo = 0.0, hi = 0.0;
    if (cfg.e_lo && cfg.e_hi) {
        lo = *cfg.e_lo;
        hi = *cfg.e_hi;
    } else if (cfg.e_lo || cfg.e_hi) {
        throw ParameterError("--e-lo and --e-hi go together");
    } else {
        // Both parities: opposite-parity levels at a node wall sit about half a
        // same-parity spacing away, so the window widens to reach them.
        const double spacing = estimate_level_spacing(prob, *e_ref, 1e-3 * std::max(1.0, std::abs(*e_ref)));
        const double reach = (cfg.parity == "both" ? 0.75 : 0.25) * spacing;
        lo = *e_ref - reach;
        hi = *e_ref + reach;
    }

    json j{{"potential", cfg.potential},
           {"half_width", prob.half_width},
           {"step", ShootingSolver(prob).step()},
           {"reference_energy", optional_number(e_ref)},
           {"window", {lo, hi}}};
    std::string csv = "parity,eigenvalue\n";
    std::optional<double> trace_energy;

    const auto add = [&](const char* name, const SpectrumResult& s) {
        j[name] = spectrum_json(s);
        for (double e : s.eigenvalues) csv += std::string(name) + "," + format_double(e) + "\n";
        if (!trace_energy && !s.empty) trace_energy = s.eigenvalues.front();
    };
    if (cfg.parity == "both") {
        const auto paired = paired_spectrum(prob, lo, hi, cfg.tol_e, e_ref.value_or(0.5 * (lo + hi)));
        add("even", paired.even);
        add("odd", paired.odd);
        j["splitting"] = optional_number(paired.splitting);
    } else {
        add(cfg.parity.c_str(), eigen_bisect(prob, lo, hi, cfg.tol_e));
    }

    if (!cfg.trace.empty() && trace_energy) {
        if (cfg.parity == "both") prob.parity = Parity::Even;
        const auto t = numerov_integrate(prob, *trace_energy);
        const std::vector<std::string> header{"x", "psi"};
        const std::vector<std::vector<double>> cols{t.x, t.psi};
        std::ofstream tf(cfg.trace, std::ios::binary);
        if (!tf) throw ParameterError("cannot write trace file " + cfg.trace);
        tf << csv_table(header, cols);
    }
    return {format == "json" ? j.dump(2) + "\n" : csv};
}

Outcome cmd_figure2(const RunConfig& cfg) {
    const std::string format = format_of(cfg, "csv");
    const auto curve = gamma_zero_potential(make_profile(LorentzSqrt{cfg.a}), grid_from(cfg, 10.0, 2001));
    if (format == "json") return {json{{"x", curve.grid}, {"v", curve.v}}.dump(2) + "\n"};
    const std::vector<std::string> header{"x", "v"};
    const std::vector<std::vector<double>> cols{curve.grid, curve.v};
    return {csv_table(header, cols)};
}

Outcome cmd_sweep(const RunConfig& cfg, std::ostream& err) {
    const std::string format = format_of(cfg, "csv");
    const auto gammas = parse_list(cfg.gammas, "--gammas");
    const auto study = gamma_collapse_study(profile_from(cfg), gammas, cfg.window_x);

    Outcome o;
    o.code = study.slope_ok ? kSuccess : kCheckFailed;
    if (format == "json") {
        json rows = json::array();
        for (const auto& r : study.rows) rows.push_back({{"gamma", r.gamma}, {"ratio", r.ratio}});
        o.text = json{{"rows", rows},
                      {"slope", study.slope},
                      {"expected_slope", kCollapseSlope},
                      {"tolerance", kCollapseSlopeTol},
                      {"slope_ok", study.slope_ok}}
                     .dump(2) +
                 "\n";
        return o;
    }
    o.text = "gamma,ratio\n";
    for (const auto& r : study.rows) o.text += format_double(r.gamma) + "," + format_double(r.ratio) + "\n";
    err << "log-log slope " << format_double(study.slope) << (study.slope_ok ? " (ok)" : " (outside 2 +/- 0.05)")
        << "\n";
    return o;
}

void emit(const RunConfig& cfg, const Outcome& o, std::ostream& out) {
    if (cfg.out.empty()) {
        out << o.text;
        return;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw ParameterError("cannot write output file " + cfg.out);
    f << o.text;
    if (!f) throw ParameterError("failed writing output file " + cfg.out);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig cfg;
    CLI::App app{"Degenerate bound states in bottomless 1D potentials", "degenpair"};
    app.set_config("--config", "", "key = value file; command-line flags override it");
    app.require_subcommand(1, 1);

    app.add_option("--family", cfg.family, "sech-power | gaussian | lorentz | tabulated");
    app.add_option("--nu", cfg.nu, "sech-power exponent");
    app.add_option("--alpha", cfg.alpha, "gaussian width parameter");
    app.add_option("--a", cfg.a, "lorentz amplitude");
    app.add_option("--table", cfg.table, "two-column (x, f) profile table");
    app.add_option("--table-csv", cfg.table_csv, "CSV profile source (column picked by --table-column)");
    app.add_option("--table-column", cfg.table_column);
    app.add_option("--a1", cfg.a1, "Koley-Kar A1 (decimal or p/q)");
    app.add_option("--gamma", cfg.gamma, "gamma (decimal or p/q)");
    app.add_option("--gamma-sq", cfg.gamma_sq, "gamma^2 (decimal or p/q)");
    app.add_option("--b", cfg.b, "odd-state coefficient B");
    app.add_option("--energy-ref", cfg.energy_ref, "origin (V(0) = 0) | given");
    app.add_option("--xmax", cfg.x_max, "grid half-width");
    app.add_option("--n", cfg.n_points, "grid points (odd)");
    app.add_flag("--inject-fault", cfg.inject_fault, "perturb V at the origin node before verifying");
    app.add_option("--fault-size", cfg.fault_size);
    app.add_option("--sweep-gamma-sq", cfg.sweep_gamma_sq, "comma-separated gamma^2 values");
    app.add_option("--potential", cfg.potential, "pair | free");
    app.add_option("--L", cfg.half_width, "hard-wall half-width");
    app.add_option("--step", cfg.step, "Numerov step h");
    app.add_option("--parity", cfg.parity, "even | odd | both");
    app.add_option("--node-index", cfg.node_index, "place the wall on this node of the analytic state");
    app.add_option("--e-lo", cfg.e_lo);
    app.add_option("--e-hi", cfg.e_hi);
    app.add_option("--tol-e", cfg.tol_e);
    app.add_option("--trace", cfg.trace, "write the Numerov trace CSV here");
    app.add_option("--gammas", cfg.gammas, "comma-separated decreasing gammas");
    app.add_option("--window-x", cfg.window_x);
    app.add_option("--out", cfg.out, "output path (stdout when absent)");
    app.add_option("--format", cfg.format, "csv | json");

    const auto sub = [&](const char* name, const char* help) {
        auto* s = app.add_subcommand(name, help);
        s->fallthrough();
        return s;
    };
    auto* construct = sub("construct", "write x,v,psi_plus,psi_minus,energy");
    auto* verify = sub("verify", "run the invariant battery");
    auto* wellscape = sub("wellscape", "classify the Lorentzian well");
    auto* spectrum = sub("spectrum", "hard-wall Numerov spectrum");
    auto* figure2 = sub("figure2", "gamma = 0 Lorentzian volcano");
    auto* sweep = sub("sweep", "odd-state weight as gamma -> 0");

    std::vector<std::string> storage{"degenpair"};
    storage.insert(storage.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& s : storage) argv.push_back(s.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kConfigError;
    }

    try {
        Outcome o;
        if (construct->parsed()) o = cmd_construct(cfg);
        else if (verify->parsed()) o = cmd_verify(cfg);
        else if (wellscape->parsed()) o = cmd_wellscape(cfg);
        else if (spectrum->parsed()) o = cmd_spectrum(cfg);
        else if (figure2->parsed()) o = cmd_figure2(cfg);
        else if (sweep->parsed()) o = cmd_sweep(cfg, err);
        emit(cfg, o, out);
        return o.code;
    } catch (const ParameterError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const UnsupportedLimitError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const ConvergenceError& e) {
        err << "numerical error: " << e.what() << " (achieved " << e.achieved_error() << ")\n";
        return kNumericalError;
    } catch (const std::exception& e) {
        err << "numerical error: " << e.what() << "\n";
        return kNumericalError;
    }
}

int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

} // namespace degen::cli
