#include "degen/quadrature.hpp"

#include "degen/errors.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <memory>
#include <mutex>
#include <string>

namespace degen::quad {
namespace {

constexpr std::size_t kWorkspaceLimit = 2000;

void disable_gsl_abort() {
    static std::once_flag once;
    std::call_once(once, [] { gsl_set_error_handler_off(); });
}

struct WorkspaceDeleter {
    void operator()(gsl_integration_workspace* w) const { gsl_integration_workspace_free(w); }
};

// Exceptions must not unwind through GSL's C frames; park them here.
struct Trampoline {
    const Integrand* fn;
    std::exception_ptr pending;
};

double call_integrand(double x, void* params) {
    auto* t = static_cast<Trampoline*>(params);
    if (t->pending) return std::numeric_limits<double>::quiet_NaN();
    try {
        return (*t->fn)(x);
    } catch (...) {
        t->pending = std::current_exception();
        return std::numeric_limits<double>::quiet_NaN();
    }
}

} // namespace

Estimate integrate(const Integrand& fn, double a, double b, double abs_tol, double rel_tol) {
    if (!(abs_tol > 0.0)) throw ParameterError("quadrature tolerance must be positive");
    if (a == b) return {};
    disable_gsl_abort();

    std::unique_ptr<gsl_integration_workspace, WorkspaceDeleter> ws(
        gsl_integration_workspace_alloc(kWorkspaceLimit));
    Trampoline t{&fn, nullptr};
    gsl_function gf{&call_integrand, &t};

    Estimate out;
    const int status = gsl_integration_qag(&gf, a, b, abs_tol, rel_tol, kWorkspaceLimit,
                                           GSL_INTEG_GAUSS21, ws.get(), &out.value,
                                           &out.abs_error);
    if (t.pending) std::rethrow_exception(t.pending);

    const double target = std::max(abs_tol, rel_tol * std::abs(out.value));
    if (!std::isfinite(out.value) || (status != GSL_SUCCESS && out.abs_error > target)) {
        throw ConvergenceError("adaptive quadrature did not converge on [" + std::to_string(a) +
                                   ", " + std::to_string(b) + "]: " + gsl_strerror(status),
                               out.abs_error);
    }
    return out;
}

Estimate integrate_to_infinity(const Integrand& fn, double a, double abs_tol) {
    if (!(abs_tol > 0.0)) throw ParameterError("quadrature tolerance must be positive");

    constexpr int kMaxSegments = 120;
    constexpr int kGrowthStreak = 4;

    double lo = a;
    double width = std::max(1.0, std::abs(a));
    double sum = 0.0;
    double err = 0.0;
    double prev_piece = 0.0;
    double prev_total = std::numeric_limits<double>::quiet_NaN();
    int growth = 0;

    for (int k = 0; k < kMaxSegments; ++k) {
        const auto piece = integrate(fn, lo, lo + width, abs_tol * 1e-2);
        sum += piece.value;
        err += piece.abs_error;
        lo += width;
        width *= 2.0;

        double tail = 0.0;
        if (k > 0 && prev_piece != 0.0) {
            const double ratio = std::abs(piece.value / prev_piece);
            if (ratio < 1.0) {
                tail = piece.value * ratio / (1.0 - ratio);
                growth = 0;
            } else if (++growth >= kGrowthStreak) {
                throw DivergenceError("tail integral grows with truncation point", std::abs(piece.value));
            }
        }
        const double total = sum + tail;
        if (std::abs(total - prev_total) < abs_tol && std::abs(piece.value) < 1e3 * abs_tol + std::abs(tail)) {
            return {total, err + std::abs(total - prev_total)};
        }
        if (piece.value == 0.0 && k > 0) return {sum, err};
        prev_total = total;
        prev_piece = piece.value;
    }
    throw DivergenceError("tail integral did not settle within the segment budget", std::abs(prev_piece));
}

} // namespace degen::quad
