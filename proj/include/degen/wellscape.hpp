#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace degen {

/// Landscape of the Lorentzian-profile potential
///   V - E = (2x^2 - 1)/(x^2 + 1)^2 - (gamma^2/a^4)(x^2 + 1)^2
/// relative to the degenerate energy.
enum class Regime {
    ConvexNoWell,      ///< gamma^2 >= 2 a^4: no barrier maxima
    WellStatesAbove,   ///< a^4/16 < gamma^2 < 2 a^4
    WellStatesInside,  ///< gamma^2 < a^4/16
    CriticalBoundary,  ///< gamma^2 == a^4/16: barrier top at the energy
};

std::string_view regime_name(Regime r);

struct WellThresholds {
    double well_formation = 0.0; ///< gamma^2 = 2 a^4
    double placement = 0.0;      ///< gamma^2 = a^4 / 16
};

struct WellReport {
    double a = 1.0;
    double gamma_sq = 0.0;
    Regime regime = Regime::ConvexNoWell;
    std::optional<double> z_root;                      ///< x_max^2
    std::optional<std::pair<double, double>> x_maxima; ///< (-sqrt z, +sqrt z)
    std::optional<double> barrier_height_rel;          ///< 3(z - 1)/(z + 1)^2
    std::optional<double> barrier_direct;              ///< V - E evaluated at sqrt z
    WellThresholds thresholds;
};

/// gamma^2 (z + 1)^4 - a^4 (2 - z); increasing in z, its root in [0, 2] is x_max^2.
double maxima_condition(double a, double gamma_sq, double z);

/// Barrier height above the degenerate energy at z = x_max^2.
double barrier_height(double z);

/// Lorentzian V - E at x.
double lorentz_v_minus_e(double a, double gamma_sq, double x);

WellReport solve_maxima(double a, double gamma);
WellReport solve_maxima_sq(double a, double gamma_sq);

/// One report per gamma^2 value.
std::vector<WellReport> classify_sweep(double a, std::span<const double> gamma_sq_grid);

/// gamma^2 locations where a well first forms and where the states move
/// inside it, found by bisection on the solved maxima (not on the
/// closed-form thresholds).
struct RegimeBoundaries {
    double well_formation = 0.0;
    double placement = 0.0;
};

RegimeBoundaries locate_regime_boundaries(double a, double tol);

} // namespace degen
