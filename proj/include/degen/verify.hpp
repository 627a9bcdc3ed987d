#pragma once

#include "degen/construct.hpp"

#include <span>
#include <vector>

namespace degen {

/// Measured value against its acceptance threshold (pass iff value <= threshold).
struct MetricCheck {
    double value = 0.0;
    double threshold = 0.0;
    bool pass() const { return value <= threshold; }
};

/// Boolean property together with the data that decided it.
struct PropertyCheck {
    bool holds = true;
    bool applicable = true;
    std::vector<double> witness;
};

struct Thresholds {
    double residual = 1e-8;
    double wronskian_drift = 1e-10;
    double wronskian_value_rel = 1e-12;
    double orthogonality = 1e-12;
};

struct WronskianScan {
    std::vector<double> values;
    double drift = 0.0;
};

struct VerificationReport {
    MetricCheck residual_plus;
    MetricCheck residual_minus;
    MetricCheck wronskian_drift;
    MetricCheck wronskian_value; ///< relative deviation of |W(0)| from |B| gamma
    double wronskian_at_origin = 0.0;
    MetricCheck orthogonality;
    PropertyCheck interlacing;   ///< witness: unused; zeros below
    std::vector<double> zeros_plus;
    std::vector<double> zeros_minus;
    double onset = 0.0;
    PropertyCheck node_spacing;  ///< witness: gaps between psi_plus zeros beyond onset
    PropertyCheck slope_growth;  ///< witness: |psi_plus'| at those zeros

    bool all_pass() const;
};

inline constexpr double kDriftFloor = 1e-300;
inline constexpr double kZeroTolerance = 1e-12;

/// max_i |psi'' + (E - V) psi| / (1 + |psi|) over the grid. psi'' comes from
/// f, f', f'' and the phase; psi and V - E come from the pair's arrays.
double schrodinger_residual(const DegeneratePair& pair, State which);

/// W(x) = psi_minus psi_plus' - psi_plus psi_minus' at every node, and
/// max |W(x) - W(0)| / max(|W(0)|, 1e-300).
WronskianScan wronskian_scan(const DegeneratePair& pair);

/// Zeros of one state in [x_lo, x_hi]: sign changes on the grid refined by
/// bisection to 1e-12. Throws ResolutionError when a cell holds more than
/// one zero, ParameterError when the window leaves the grid or the state
/// vanishes identically.
std::vector<double> find_zeros(const DegeneratePair& pair, State which, double x_lo, double x_hi);

/// True iff strictly between consecutive zeros of either list lies exactly
/// one zero of the other.
bool check_interlacing(std::span<const double> zeros_a, std::span<const double> zeros_b);

/// |int psi_plus psi_minus dx| over the grid (trapezoid).
double orthogonality(const DegeneratePair& pair);

/// int_{|x| > X} f^2 dx.
double norm_tail(const DegeneratePair& pair, double x_cut, double tol = 1e-14);

/// Largest non-negative node where f' >= 0, plus one grid cell.
double monotone_onset(const DegeneratePair& pair);

/// Gaps between consecutive zeros are strictly decreasing.
PropertyCheck node_spacing_check(std::span<const double> zeros);

/// |psi_plus'| at the given zeros of psi_plus is strictly increasing.
PropertyCheck slope_growth_check(const DegeneratePair& pair, std::span<const double> zeros_plus);

VerificationReport run_verification(const DegeneratePair& pair, const Thresholds& thresholds = {});

/// Copy of the pair with V - E shifted by delta at one node.
DegeneratePair with_potential_fault(DegeneratePair pair, std::size_t index, double delta);

} // namespace degen
