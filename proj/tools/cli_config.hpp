#pragma once

#include "degen/construct.hpp"
#include "degen/profiles.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace degen::cli {

/// Everything the subcommands read. Optional fields are unset when the flag
/// (or config key) was not given; subcommands supply their own defaults.
struct RunConfig {
    std::string family = "sech-power";
    double nu = 1.0;
    double alpha = 1.0;
    double a = 1.0;
    std::string table;
    std::string table_csv;
    std::string table_column = "psi_plus";

    std::optional<std::string> a1;
    std::optional<std::string> gamma;
    std::optional<std::string> gamma_sq;
    double b = 1.0;
    std::string energy_ref = "origin";

    std::optional<double> x_max;
    std::optional<int> n_points;

    bool inject_fault = false;
    double fault_size = 1e-3;

    std::optional<std::string> sweep_gamma_sq;

    std::string potential = "pair";
    std::optional<double> half_width;
    double step = 1e-4;
    std::string parity = "both";
    int node_index = 0;
    std::optional<double> e_lo;
    std::optional<double> e_hi;
    double tol_e = 1e-10;
    std::string trace;

    std::string gammas = "1e-2,1e-3,1e-4";
    double window_x = 2.0;

    std::string out;
    std::optional<std::string> format; ///< each subcommand has its own default
};

/// Decimal or p/q.
double parse_number(std::string_view text, std::string_view what);
std::vector<double> parse_list(std::string_view text, std::string_view what);

/// 17 significant digits: round-trip exact and locale independent.
std::string format_double(double v);

Profile profile_from(const RunConfig& cfg);

/// Pair built from the config: Koley-Kar when --a1 is given, otherwise the
/// general construction with --gamma.
DegeneratePair pair_from(const RunConfig& cfg, const GridSpec& grid);
PairConfig pair_config_from(const RunConfig& cfg);
GridSpec grid_from(const RunConfig& cfg, double default_x_max, int default_n);

std::string csv_table(std::span<const std::string> header, std::span<const std::vector<double>> columns);

} // namespace degen::cli
