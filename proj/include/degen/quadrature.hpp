#pragma once

#include <functional>

namespace degen::quad {

using Integrand = std::function<double(double)>;

struct Estimate {
    double value = 0.0;
    double abs_error = 0.0;
};

/// Default relative accuracy floor. Requests for an absolute tolerance
/// below rel_floor * |I| are satisfied once the relative target is met.
inline constexpr double kRelFloor = 1e-13;

/// Adaptive Gauss-Kronrod integration of fn over [a, b] (a may exceed b).
/// Throws ConvergenceError carrying the achieved error estimate when neither
/// abs_tol nor rel_tol * |I| is reached.
Estimate integrate(const Integrand& fn, double a, double b, double abs_tol,
                   double rel_tol = kRelFloor);

/// Integral of fn over [a, inf) by doubling segments with geometric tail
/// extrapolation. Throws DivergenceError when segment contributions stop
/// shrinking.
Estimate integrate_to_infinity(const Integrand& fn, double a, double abs_tol);

} // namespace degen::quad
