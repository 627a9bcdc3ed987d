#include "degen/spectra.hpp"

#include "degen/construct.hpp"
#include "degen/errors.hpp"
#include "degen/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace degen {
namespace {

constexpr double kOverflow = 1e150;
constexpr int kMaxRescales = 64;

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

} // namespace

ShootingSolver::ShootingSolver(const BoxProblem& prob) : parity_(prob.parity) {
    if (!prob.potential) throw ParameterError("box problem has no potential");
    if (!(prob.half_width > 0.0) || !std::isfinite(prob.half_width))
        throw ParameterError("box half-width must be positive");
    if (!(prob.step > 0.0) || prob.step > prob.half_width)
        throw ParameterError("Numerov step must be positive and below the half-width");

    const auto n = static_cast<std::size_t>(std::ceil(prob.half_width / prob.step - 1e-9));
    h_ = prob.half_width / static_cast<double>(n);
    x_.resize(n + 1);
    v_.resize(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        x_[i] = i == n ? prob.half_width : h_ * static_cast<double>(i);
        v_[i] = prob.potential(x_[i]);
        if (!std::isfinite(v_[i])) throw ParameterError("potential is not finite inside the box");
    }
}

void ShootingSolver::check_resolution(double energy) const {
    double worst = 0.0;
    for (double v : v_) worst = std::max(worst, std::abs(energy - v));
    if (h_ * std::sqrt(worst) > 2.0 * std::numbers::pi / 20.0)
        throw ParameterError("Numerov step too coarse: fewer than 20 steps per local wavelength");
}

NumerovTrace ShootingSolver::integrate(double energy) const {
    check_resolution(energy);
    const std::size_t n = x_.size() - 1;
    const double c = h_ * h_ / 12.0;

    // psi'' = -q psi with q = E - V, u = c q. Numerov in summed form on
    // y = (1 + u) psi: y[i+1] - 2 y[i] + y[i-1] = -12 u[i] psi[i], carried
    // through first differences d to keep rounding from piling up.
    std::vector<double> u(n + 1);
    for (std::size_t i = 0; i <= n; ++i) u[i] = c * (energy - v_[i]);

    NumerovTrace t;
    t.x = x_;
    t.psi.assign(n + 1, 0.0);
    double y = 0.0;
    double d = 0.0;
    if (parity_ == Parity::Even) {
        // psi(-h) = psi(h) closes the first step.
        t.psi[0] = 1.0;
        y = 1.0 + u[0];
        d = -6.0 * u[0] * t.psi[0];
    } else {
        t.psi[0] = 0.0;
        d = (1.0 + u[1]) * h_;
    }
    y += d;
    t.psi[1] = y / (1.0 + u[1]);
    for (std::size_t i = 1; i < n; ++i) {
        d -= 12.0 * u[i] * t.psi[i];
        y += d;
        t.psi[i + 1] = y / (1.0 + u[i + 1]);
        if (std::abs(t.psi[i + 1]) > kOverflow) {
            if (++t.rescales > kMaxRescales)
                throw ConvergenceError("Numerov amplitude overflow beyond the rescaling cap", std::abs(t.psi[i + 1]));
            for (std::size_t k = 0; k <= i + 1; ++k) t.psi[k] /= kOverflow;
            y /= kOverflow;
            d /= kOverflow;
        }
    }

    int prev = sign_of(t.psi[parity_ == Parity::Even ? 0 : 1]);
    for (std::size_t i = (parity_ == Parity::Even ? 1 : 2); i <= n; ++i) {
        const int s = sign_of(t.psi[i]);
        if (s != 0 && prev != 0 && s != prev) ++t.nodes;
        if (s != 0) prev = s;
    }
    t.psi_at_wall = t.psi[n];
    t.slope_at_wall = n >= 2 ? (3.0 * t.psi[n] - 4.0 * t.psi[n - 1] + t.psi[n - 2]) / (2.0 * h_)
                             : (t.psi[n] - t.psi[n - 1]) / h_;
    return t;
}

NumerovTrace numerov_integrate(const BoxProblem& prob, double energy) {
    return ShootingSolver(prob).integrate(energy);
}

SpectrumResult eigen_bisect(const BoxProblem& prob, double e_lo, double e_hi, double tol_e) {
    if (!(e_lo < e_hi)) throw ParameterError("energy window must satisfy E_lo < E_hi");
    if (!(tol_e > 0.0)) throw ParameterError("energy tolerance must be positive");
    const ShootingSolver solver(prob);
    solver.check_resolution(e_lo);
    solver.check_resolution(e_hi);

    struct Probe {
        double e;
        NumerovTrace t;
    };
    const auto probe = [&](double e) { return Probe{e, solver.integrate(e)}; };

    SpectrumResult out;
    // Sturm: the node count rises by one at each eigenvalue.
    std::vector<std::pair<Probe, Probe>> stack{{probe(e_lo), probe(e_hi)}};
    while (!stack.empty()) {
        auto [a, b] = std::move(stack.back());
        stack.pop_back();
        const int count = b.t.nodes - a.t.nodes;
        if (count <= 0) continue;
        if (count > 1 && b.e - a.e > tol_e) {
            auto m = probe(0.5 * (a.e + b.e));
            stack.push_back({m, b});
            stack.push_back({std::move(a), std::move(m)});
            continue;
        }
        if (count > 1) {
            for (int k = 0; k < count; ++k) out.eigenvalues.push_back(0.5 * (a.e + b.e));
            continue;
        }
        double lo = a.e, hi = b.e;
        const int s_lo = sign_of(a.t.psi_at_wall);
        while (hi - lo > tol_e) {
            const double mid = 0.5 * (lo + hi);
            const int s = sign_of(solver.integrate(mid).psi_at_wall);
            if (s == 0) {
                lo = hi = mid;
                break;
            }
            (s == s_lo ? lo : hi) = mid;
        }
        out.eigenvalues.push_back(0.5 * (lo + hi));
    }
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end());
    out.empty = out.eigenvalues.empty();
    return out;
}

PairedSpectrum paired_spectrum(BoxProblem prob, double e_lo, double e_hi, double tol_e, double e_ref) {
    PairedSpectrum out;
    prob.parity = Parity::Even;
    out.even = eigen_bisect(prob, e_lo, e_hi, tol_e);
    prob.parity = Parity::Odd;
    out.odd = eigen_bisect(prob, e_lo, e_hi, tol_e);
    const auto nearest = [e_ref](const std::vector<double>& ev) {
        return *std::min_element(ev.begin(), ev.end(),
                                 [e_ref](double l, double r) { return std::abs(l - e_ref) < std::abs(r - e_ref); });
    };
    if (!out.even.empty && !out.odd.empty) {
        out.splitting = std::abs(nearest(out.even.eigenvalues) - nearest(out.odd.eigenvalues));
        out.even.splitting = out.odd.splitting = out.splitting;
    }
    return out;
}

double estimate_level_spacing(const BoxProblem& prob, double energy, double delta) {
    if (!(delta > 0.0)) throw ParameterError("spacing probe offset must be positive");
    const ShootingSolver solver(prob);
    const auto levels_within = [&](double d) {
        return solver.integrate(energy + d).nodes - solver.integrate(energy - d).nodes;
    };
    // Smallest symmetric window holding two same-parity levels: its half-width
    // is the distance to the nearest neighbour of the level at `energy`.
    constexpr int kMaxDoublings = 40;
    int doublings = 0;
    while (levels_within(delta) < 2) {
        if (++doublings > kMaxDoublings) throw ConvergenceError("no neighbouring level found", delta);
        delta *= 2.0;
    }
    double lo = doublings > 0 ? 0.5 * delta : 0.0;
    double hi = delta;
    while (hi - lo > 1e-3 * hi) {
        const double mid = 0.5 * (lo + hi);
        (levels_within(mid) >= 2 ? hi : lo) = mid;
    }
    return hi;
}

CollapseStudy gamma_collapse_study(const Profile& p, std::span<const double> gammas, double window_x) {
    if (gammas.size() < 2) throw ParameterError("collapse study needs at least two gamma values");
    if (!(window_x > 0.0)) throw ParameterError("collapse window must be positive");
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        if (!(gammas[i] > 0.0)) throw ParameterError("collapse study gammas must be positive");
        if (i > 0 && !(gammas[i] < gammas[i - 1])) throw ParameterError("collapse study gammas must decrease");
    }

    auto f2 = [&p](double x) {
        const double f = p.value(x);
        return f * f;
    };
    // Both integrands are even; integrate over [0, X].
    const double denom = quad::integrate(f2, 0.0, window_x, 1e-300, 1e-12).value;

    CollapseStudy out;
    for (double gamma : gammas) {
        const PairConfig cfg{gamma, 1.0, EnergyRef::PotentialZeroAtOrigin};
        auto odd2 = [&](double x) {
            const double s = std::sin(phase(p, cfg, x, 1e-14));
            return f2(x) * s * s;
        };
        out.rows.push_back({gamma, quad::integrate(odd2, 0.0, window_x, 1e-300, 1e-10).value / denom});
    }

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (const auto& r : out.rows) {
        const double lx = std::log(r.gamma);
        const double ly = std::log(r.ratio);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double n = static_cast<double>(out.rows.size());
    out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    out.slope_ok = std::abs(out.slope - kCollapseSlope) <= kCollapseSlopeTol;
    return out;
}

} // namespace degen
