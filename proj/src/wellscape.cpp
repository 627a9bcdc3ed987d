#include "degen/wellscape.hpp"

#include "degen/errors.hpp"

#include <cmath>

namespace degen {

std::string_view regime_name(Regime r) {
    switch (r) {
    case Regime::ConvexNoWell: return "ConvexNoWell";
    case Regime::WellStatesAbove: return "WellStatesAbove";
    case Regime::WellStatesInside: return "WellStatesInside";
    case Regime::CriticalBoundary: return "CriticalBoundary";
    }
    return "unknown";
}

double maxima_condition(double a, double gamma_sq, double z) {
    const double s = (z + 1.0) * (z + 1.0);
    const double a2 = a * a;
    return gamma_sq * s * s - a2 * a2 * (2.0 - z);
}

double barrier_height(double z) { return 3.0 * (z - 1.0) / ((z + 1.0) * (z + 1.0)); }

double lorentz_v_minus_e(double a, double gamma_sq, double x) {
    const double s = x * x + 1.0;
    const double a2 = a * a;
    return (2.0 * x * x - 1.0) / (s * s) - gamma_sq / (a2 * a2) * s * s;
}

WellReport solve_maxima_sq(double a, double gamma_sq) {
    if (!(a > 0.0) || !std::isfinite(a)) throw ParameterError("a must be positive");
    if (!(gamma_sq >= 0.0) || !std::isfinite(gamma_sq)) throw ParameterError("gamma^2 must be >= 0");

    const double a4 = a * a * a * a;
    WellReport r;
    r.a = a;
    r.gamma_sq = gamma_sq;
    r.thresholds = {2.0 * a4, a4 / 16.0};

    if (gamma_sq >= r.thresholds.well_formation) {
        r.regime = Regime::ConvexNoWell;
        return r;
    }

    double z;
    if (gamma_sq == 0.0) {
        z = 2.0;
    } else if (gamma_sq == r.thresholds.placement) {
        z = 1.0;
    } else {
        double lo = 0.0;
        double hi = 2.0;
        while (hi - lo > 1e-12) {
            const double mid = 0.5 * (lo + hi);
            (maxima_condition(a, gamma_sq, mid) < 0.0 ? lo : hi) = mid;
        }
        z = 0.5 * (lo + hi);
    }

    const double x = std::sqrt(z);
    r.z_root = z;
    r.x_maxima = std::make_pair(-x, x);
    r.barrier_height_rel = barrier_height(z);
    r.barrier_direct = lorentz_v_minus_e(a, gamma_sq, x);

    if (gamma_sq < r.thresholds.placement)
        r.regime = Regime::WellStatesInside;
    else if (gamma_sq == r.thresholds.placement)
        r.regime = Regime::CriticalBoundary;
    else
        r.regime = Regime::WellStatesAbove;
    return r;
}

WellReport solve_maxima(double a, double gamma) {
    if (!(gamma >= 0.0)) throw ParameterError("gamma must be >= 0");
    return solve_maxima_sq(a, gamma * gamma);
}

std::vector<WellReport> classify_sweep(double a, std::span<const double> gamma_sq_grid) {
    if (gamma_sq_grid.empty()) throw ParameterError("gamma sweep grid is empty");
    std::vector<WellReport> out;
    out.reserve(gamma_sq_grid.size());
    for (double g2 : gamma_sq_grid) out.push_back(solve_maxima_sq(a, g2));
    return out;
}

RegimeBoundaries locate_regime_boundaries(double a, double tol) {
    if (!(tol > 0.0)) throw ParameterError("tolerance must be positive");
    const double a4 = a * a * a * a;

    // Predicates read the solved root, never the threshold constants.
    const auto has_well = [&](double g2) { return maxima_condition(a, g2, 0.0) < 0.0; };
    const auto inside = [&](double g2) {
        const auto r = solve_maxima_sq(a, g2);
        return r.z_root && barrier_height(*r.z_root) > 0.0;
    };
    const auto bisect = [tol](auto pred, double lo, double hi) {
        // pred(lo) true, pred(hi) false
        while (hi - lo > tol * 1e-3) {
            const double mid = 0.5 * (lo + hi);
            (pred(mid) ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    };

    // Coarse sweep for brackets, then bisect.
    constexpr int kSteps = 400;
    const double top = 4.0 * a4;
    double well_lo = 0.0, well_hi = top, in_lo = 0.0, in_hi = top;
    for (int i = 0; i < kSteps; ++i) {
        const double g0 = top * i / kSteps;
        const double g1 = top * (i + 1) / kSteps;
        if (has_well(g0) && !has_well(g1)) well_lo = g0, well_hi = g1;
        if (inside(g0) && !inside(g1)) in_lo = g0, in_hi = g1;
    }
    return {bisect(has_well, well_lo, well_hi), bisect(inside, in_lo, in_hi)};
}

} // namespace degen
