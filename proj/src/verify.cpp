#include "degen/verify.hpp"

#include "degen/errors.hpp"
#include "degen/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace degen {

bool VerificationReport::all_pass() const {
    return residual_plus.pass() && residual_minus.pass() && wronskian_drift.pass() &&
           wronskian_value.pass() && orthogonality.pass() && interlacing.holds && node_spacing.holds &&
           slope_growth.holds;
}

double schrodinger_residual(const DegeneratePair& pair, State which) {
    if (pair.grid.size() < 5) throw ParameterError("residual check needs at least 5 grid points");
    const auto psi = pair.state(which);
    double worst = 0.0;
    for (std::size_t i = 0; i < pair.grid.size(); ++i) {
        const double d2 = state_jet(pair, which, i).curvature;
        const double r = std::abs(d2 - pair.v_minus_e[i] * psi[i]) / (1.0 + std::abs(psi[i]));
        // NaN must not read as a pass.
        if (!(r <= worst)) worst = std::isnan(r) ? std::numeric_limits<double>::infinity() : r;
    }
    return worst;
}

WronskianScan wronskian_scan(const DegeneratePair& pair) {
    WronskianScan scan;
    scan.values.resize(pair.grid.size());
    for (std::size_t i = 0; i < pair.grid.size(); ++i) {
        const double dplus = state_jet(pair, State::Plus, i).slope;
        const double dminus = state_jet(pair, State::Minus, i).slope;
        scan.values[i] = pair.psi_minus[i] * dplus - pair.psi_plus[i] * dminus;
    }
    const double w0 = scan.values[pair.origin_index()];
    const double scale = std::max(std::abs(w0), kDriftFloor);
    for (double w : scan.values) {
        const double d = std::abs(w - w0) / scale;
        if (!(d <= scan.drift)) scan.drift = std::isnan(d) ? std::numeric_limits<double>::infinity() : d;
    }
    return scan;
}

namespace {

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

// Number of zeros of cos g (Plus) or sin g (Minus) with phase in (g0, g1].
long phase_points_between(State which, double g0, double g1) {
    const double shift = which == State::Plus ? 0.5 : 0.0;
    const auto idx = [&](double g) { return static_cast<long>(std::floor(g / std::numbers::pi - shift)); };
    return std::abs(idx(g1) - idx(g0));
}

} // namespace

std::vector<double> find_zeros(const DegeneratePair& pair, State which, double x_lo, double x_hi) {
    if (!(x_lo < x_hi)) throw ParameterError("zero window must satisfy x_lo < x_hi");
    if (x_lo < pair.grid.front() || x_hi > pair.grid.back())
        throw ParameterError("zero window must lie inside the grid");
    if (which == State::Minus && pair.config.gamma == 0.0)
        throw ParameterError("the odd state vanishes identically at gamma = 0");

    const auto psi = pair.state(which);
    const auto value_at = [&](double x) { return evaluate_state(pair, which, x).value; };

    // Sample points: window ends plus every node strictly inside.
    const auto phase_at = [&](double x) { return phase(pair.profile, pair.config, x, 1e-12); };
    std::vector<double> xs{x_lo};
    std::vector<double> vs{value_at(x_lo)};
    std::vector<double> gs{phase_at(x_lo)};
    for (std::size_t i = 0; i < pair.grid.size(); ++i) {
        if (pair.grid[i] > x_lo && pair.grid[i] < x_hi) {
            xs.push_back(pair.grid[i]);
            vs.push_back(psi[i]);
            gs.push_back(pair.phase[i]);
        }
    }
    xs.push_back(x_hi);
    vs.push_back(value_at(x_hi));
    gs.push_back(phase_at(x_hi));

    const bool use_phase = pair.config.gamma > 0.0;

    std::vector<double> zeros;
    for (std::size_t k = 0; k < xs.size(); ++k) {
        if (vs[k] == 0.0) zeros.push_back(xs[k]);
        if (k + 1 == xs.size()) break;

        double a = xs[k];
        double b = xs[k + 1];
        if (use_phase && phase_points_between(which, gs[k], gs[k + 1]) > 1)
            throw ResolutionError("grid cell [" + std::to_string(a) + ", " + std::to_string(b) +
                                  "] holds more than one zero; refine the grid");
        const int sa = sign_of(vs[k]);
        const int sb = sign_of(vs[k + 1]);
        if (sa == 0 || sb == 0) continue;
        if (sa == sb) {
            if (sign_of(value_at(0.5 * (a + b))) == -sa)
                throw ResolutionError("grid cell [" + std::to_string(a) + ", " + std::to_string(b) +
                                      "] hides a pair of zeros; refine the grid");
            continue;
        }
        while (b - a > kZeroTolerance) {
            const double m = 0.5 * (a + b);
            const double vm = value_at(m);
            if (vm == 0.0) {
                a = b = m;
                break;
            }
            (sign_of(vm) == sa ? a : b) = m;
        }
        zeros.push_back(0.5 * (a + b));
    }
    return zeros;
}

bool check_interlacing(std::span<const double> zeros_a, std::span<const double> zeros_b) {
    const auto one_between = [](std::span<const double> outer, std::span<const double> inner) {
        for (std::size_t i = 0; i + 1 < outer.size(); ++i) {
            const auto n = std::count_if(inner.begin(), inner.end(),
                                         [&](double z) { return z > outer[i] && z < outer[i + 1]; });
            if (n != 1) return false;
        }
        return true;
    };
    return one_between(zeros_a, zeros_b) && one_between(zeros_b, zeros_a);
}

double orthogonality(const DegeneratePair& pair) {
    const std::size_t n = pair.grid.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
        sum += w * pair.psi_plus[i] * pair.psi_minus[i];
    }
    return std::abs(sum * pair.spacing());
}

double norm_tail(const DegeneratePair& pair, double x_cut, double tol) {
    if (!(x_cut >= 0.0)) throw ParameterError("tail cut must be non-negative");
    const Profile& p = pair.profile;
    auto f2 = [&p](double x) {
        const double f = p.value(x);
        return f * f;
    };
    const double edge = p.domain_half_width();
    if (std::isinf(edge)) return 2.0 * quad::integrate_to_infinity(f2, x_cut, 0.5 * tol).value;
    if (x_cut >= edge) return 0.0;
    return 2.0 * quad::integrate(f2, x_cut, edge, 0.5 * tol).value;
}

double monotone_onset(const DegeneratePair& pair) {
    const std::size_t mid = pair.origin_index();
    double last = 0.0;
    for (std::size_t i = mid; i < pair.grid.size(); ++i)
        if (pair.profile.eval(pair.grid[i]).df >= 0.0) last = pair.grid[i];
    return last + pair.spacing();
}

PropertyCheck node_spacing_check(std::span<const double> zeros) {
    PropertyCheck out;
    for (std::size_t i = 0; i + 1 < zeros.size(); ++i) out.witness.push_back(zeros[i + 1] - zeros[i]);
    out.applicable = out.witness.size() >= 2;
    for (std::size_t i = 0; i + 1 < out.witness.size(); ++i)
        if (!(out.witness[i + 1] < out.witness[i])) out.holds = false;
    return out;
}

PropertyCheck slope_growth_check(const DegeneratePair& pair, std::span<const double> zeros_plus) {
    PropertyCheck out;
    for (double z : zeros_plus) out.witness.push_back(std::abs(evaluate_state(pair, State::Plus, z).slope));
    out.applicable = out.witness.size() >= 2;
    for (std::size_t i = 0; i + 1 < out.witness.size(); ++i)
        if (!(out.witness[i + 1] > out.witness[i])) out.holds = false;
    return out;
}

VerificationReport run_verification(const DegeneratePair& pair, const Thresholds& t) {
    VerificationReport r;
    r.residual_plus = {schrodinger_residual(pair, State::Plus), t.residual};
    r.residual_minus = {schrodinger_residual(pair, State::Minus), t.residual};

    const auto scan = wronskian_scan(pair);
    r.wronskian_drift = {scan.drift, t.wronskian_drift};
    r.wronskian_at_origin = scan.values[pair.origin_index()];
    const double expected = std::abs(pair.config.b_coeff) * pair.config.gamma;
    r.wronskian_value = {std::abs(std::abs(r.wronskian_at_origin) - expected) / std::max(expected, kDriftFloor),
                         t.wronskian_value_rel};
    r.orthogonality = {orthogonality(pair), t.orthogonality};

    r.onset = monotone_onset(pair);
    if (pair.config.gamma == 0.0) {
        // Only one independent state: the zero-based properties do not apply.
        r.interlacing.applicable = r.node_spacing.applicable = r.slope_growth.applicable = false;
        return r;
    }

    const double lo = pair.grid.front();
    const double hi = pair.grid.back();
    r.zeros_plus = find_zeros(pair, State::Plus, lo, hi);
    r.zeros_minus = find_zeros(pair, State::Minus, lo, hi);
    r.interlacing.applicable = r.zeros_plus.size() + r.zeros_minus.size() >= 3;
    r.interlacing.holds = check_interlacing(r.zeros_plus, r.zeros_minus);

    std::vector<double> tail;
    std::copy_if(r.zeros_plus.begin(), r.zeros_plus.end(), std::back_inserter(tail),
                 [&](double z) { return z > r.onset; });
    r.node_spacing = node_spacing_check(tail);
    r.slope_growth = slope_growth_check(pair, tail);
    return r;
}

DegeneratePair with_potential_fault(DegeneratePair pair, std::size_t index, double delta) {
    if (index >= pair.grid.size()) throw ParameterError("fault index outside the grid");
    pair.v_minus_e[index] += delta;
    return pair;
}

} // namespace degen
