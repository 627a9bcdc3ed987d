#include "cli_config.hpp"

#include "degen/errors.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>

namespace degen::cli {
namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double parse_decimal(std::string_view text, std::string_view what) {
    text = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v))
        throw ParameterError(fmt::format("malformed value '{}' for {}", text, what));
    return v;
}

} // namespace

double parse_number(std::string_view text, std::string_view what) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return parse_decimal(text, what);
    const double num = parse_decimal(text.substr(0, slash), what);
    const double den = parse_decimal(text.substr(slash + 1), what);
    if (den == 0.0) throw ParameterError(fmt::format("zero denominator in {}", what));
    return num / den;
}

std::vector<double> parse_list(std::string_view text, std::string_view what) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto end = comma == std::string_view::npos ? text.size() : comma;
        out.push_back(parse_number(text.substr(start, end - start), what));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string format_double(double v) { return fmt::format("{:.17g}", v); }

Profile profile_from(const RunConfig& cfg) {
    if (cfg.family == "sech-power") return make_profile(SechPower{cfg.nu});
    if (cfg.family == "gaussian") return make_profile(Gaussian{cfg.alpha});
    if (cfg.family == "lorentz") return make_profile(LorentzSqrt{cfg.a});
    if (cfg.family == "tabulated") {
        if (!cfg.table.empty()) return make_profile(read_table(cfg.table));
        if (!cfg.table_csv.empty()) return make_profile(read_csv_column(cfg.table_csv, cfg.table_column));
        throw ParameterError("tabulated family needs --table or --table-csv");
    }
    throw ParameterError("unknown family '" + cfg.family + "'");
}

PairConfig pair_config_from(const RunConfig& cfg) {
    if (cfg.a1 && cfg.gamma) throw ParameterError("--a1 and --gamma are mutually exclusive");
    PairConfig pc;
    pc.b_coeff = cfg.b;
    if (cfg.a1) {
        if (cfg.family != "sech-power") throw ParameterError("--a1 applies to the sech-power family only");
        const double a1 = parse_number(*cfg.a1, "--a1");
        if (!(a1 > 0.0)) throw ParameterError("--a1 must be positive");
        pc.gamma = std::sqrt(a1);
        pc.energy_ref = EnergyRef::PotentialAsGiven;
        return pc;
    }
    pc.gamma = cfg.gamma ? parse_number(*cfg.gamma, "--gamma") : 1.0;
    if (cfg.energy_ref == "origin")
        pc.energy_ref = EnergyRef::PotentialZeroAtOrigin;
    else if (cfg.energy_ref == "given")
        pc.energy_ref = EnergyRef::PotentialAsGiven;
    else
        throw ParameterError("--energy-ref must be 'origin' or 'given'");
    if (!(pc.gamma >= 0.0)) throw ParameterError("--gamma must be >= 0");
    if (pc.b_coeff == 0.0) throw ParameterError("--b must be nonzero");
    return pc;
}

GridSpec grid_from(const RunConfig& cfg, double default_x_max, int default_n) {
    GridSpec g{cfg.x_max.value_or(default_x_max), cfg.n_points.value_or(default_n)};
    if (!(g.x_max > 0.0)) throw ParameterError("--xmax must be positive");
    if (g.n_points < 5 || g.n_points % 2 == 0) throw ParameterError("--n must be odd and at least 5");
    return g;
}

DegeneratePair pair_from(const RunConfig& cfg, const GridSpec& grid) {
    const auto pc = pair_config_from(cfg);
    if (cfg.a1) {
        if (cfg.b != 1.0) throw ParameterError("the Koley-Kar pair fixes B = 1");
        return koley_kar_pair(cfg.nu, parse_number(*cfg.a1, "--a1"), grid);
    }
    return build_pair(profile_from(cfg), pc, grid);
}

std::string csv_table(std::span<const std::string> header, std::span<const std::vector<double>> columns) {
    std::string out;
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c) out += ',';
        out += header[c];
    }
    out += '\n';
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < columns.size(); ++c) {
            if (c) out += ',';
            out += format_double(columns[c][r]);
        }
        out += '\n';
    }
    return out;
}

} // namespace degen::cli
