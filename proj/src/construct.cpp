#include "degen/construct.hpp"

#include "degen/errors.hpp"
#include "degen/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace degen {
namespace {

void validate_config(const PairConfig& cfg) {
    if (!(cfg.gamma >= 0.0) || !std::isfinite(cfg.gamma)) throw ParameterError("gamma must be >= 0");
    if (cfg.b_coeff == 0.0 || !std::isfinite(cfg.b_coeff)) throw ParameterError("B must be nonzero");
}

void validate_grid(const GridSpec& spec) {
    if (!(spec.x_max > 0.0) || !std::isfinite(spec.x_max)) throw ParameterError("x_max must be positive");
    if (spec.n_points < 3) throw ParameterError("grid needs at least 3 points");
    if (spec.n_points % 2 == 0) throw ParameterError("grid point count must be odd so that x = 0 is a node");
}

} // namespace

std::vector<double> symmetric_grid(const GridSpec& spec) {
    validate_grid(spec);
    const std::size_t n = static_cast<std::size_t>(spec.n_points);
    const std::size_t half = n / 2;
    std::vector<double> grid(n);
    for (std::size_t k = 0; k <= half; ++k) {
        const double x = spec.x_max * static_cast<double>(k) / static_cast<double>(half);
        grid[half - k] = -x;
        grid[half + k] = x;
    }
    return grid;
}

double phase_quadrature(const Profile& p, double gamma, double x, double tol) {
    if (!(tol > 0.0)) throw ParameterError("phase tolerance must be positive");
    if (gamma == 0.0 || x == 0.0) return 0.0;
    auto inv_f2 = [&p](double t) {
        const double f = p.value(t);
        return 1.0 / (f * f);
    };
    // Integrate on |x| and restore the sign so g stays exactly odd.
    const double ax = std::abs(x);
    const double g = gamma * quad::integrate(inv_f2, 0.0, ax, tol / gamma).value;
    return x < 0.0 ? -g : g;
}

double phase(const Profile& p, const PairConfig& cfg, double x, double tol) {
    if (!(tol > 0.0)) throw ParameterError("phase tolerance must be positive");
    if (auto closed = phase_closed_form(p, cfg.gamma); closed.available) {
        const double g = closed.g_exact(std::abs(x));
        return x < 0.0 ? -g : g;
    }
    return phase_quadrature(p, cfg.gamma, x, tol);
}

double node_position(const Profile& p, double gamma, double target_phase, double tol) {
    if (!(gamma > 0.0)) throw ParameterError("node placement needs gamma > 0");
    if (!(target_phase > 0.0)) throw ParameterError("node placement needs a positive target phase");
    const PairConfig cfg{gamma, 1.0, EnergyRef::PotentialZeroAtOrigin};
    const auto g = [&](double x) { return phase(p, cfg, x, 1e-14); };
    const double edge = p.domain_half_width();

    double hi = std::min(1.0, edge);
    while (g(hi) < target_phase) {
        if (hi >= edge) throw ParameterError("target phase not reached inside the profile range");
        hi = std::min(2.0 * hi, edge);
    }
    double lo = 0.0;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (g(mid) < target_phase ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double v_minus_e_at(const Profile& p, double gamma, double x) {
    const auto v = p.eval(x);
    const double gp = gamma / (v.f * v.f);
    return v.d2f / v.f - gp * gp;
}

double pair_energy(const Profile& p, const PairConfig& cfg) {
    if (cfg.energy_ref == EnergyRef::PotentialZeroAtOrigin) return 0.0 - v_minus_e_at(p, cfg.gamma, 0.0);
    const auto limit = p.asymptotic_curvature();
    if (!limit)
        throw UnsupportedLimitError("profile " + p.family_name() +
                                    " has no finite f''/f limit; use the V(0) = 0 reference");
    return 0.0 - *limit;
}

std::function<double(double)> potential_function(const Profile& p, const PairConfig& cfg) {
    validate_config(cfg);
    const double e = pair_energy(p, cfg);
    return [p, gamma = cfg.gamma, e](double x) { return v_minus_e_at(p, gamma, x) + e; };
}

std::vector<double> DegeneratePair::potential() const {
    std::vector<double> v(v_minus_e.size());
    std::transform(v_minus_e.begin(), v_minus_e.end(), v.begin(), [this](double d) { return d + energy; });
    return v;
}

DegeneratePair build_pair(const Profile& p, const PairConfig& cfg, const GridSpec& spec, double phase_tol) {
    validate_config(cfg);
    auto grid = symmetric_grid(spec);
    if (spec.x_max > p.domain_half_width())
        throw ParameterError("grid extends beyond the tabulated profile range");

    const std::size_t n = grid.size();
    const std::size_t mid = n / 2;
    DegeneratePair pair{p, cfg, std::move(grid), {}, {}, {}, {}, 0.0, -cfg.b_coeff * cfg.gamma};
    pair.energy = pair_energy(p, cfg);
    pair.v_minus_e.resize(n);
    pair.phase.resize(n);
    pair.psi_plus.resize(n);
    pair.psi_minus.resize(n);

    // Fill x >= 0 and mirror: exact parity on the symmetric grid.
    for (std::size_t k = 0; k <= mid; ++k) {
        const double x = pair.grid[mid + k];
        const double f = p.value(x);
        const double g = phase(p, cfg, x, phase_tol);
        const double vme = v_minus_e_at(p, cfg.gamma, x);
        const double plus = f * std::cos(g);
        const double minus = cfg.b_coeff * f * std::sin(g);

        pair.v_minus_e[mid - k] = pair.v_minus_e[mid + k] = vme;
        pair.phase[mid - k] = -g;
        pair.phase[mid + k] = g;
        pair.psi_plus[mid - k] = pair.psi_plus[mid + k] = plus;
        pair.psi_minus[mid - k] = -minus;
        pair.psi_minus[mid + k] = minus;
    }
    return pair;
}

DegeneratePair koley_kar_pair(double nu, double a1, const GridSpec& grid) {
    if (!(nu > 0.0)) throw ParameterError("nu must be positive");
    if (!(a1 > 0.0)) throw ParameterError("A1 must be positive");
    return build_pair(make_profile(SechPower{nu}), {std::sqrt(a1), 1.0, EnergyRef::PotentialAsGiven}, grid);
}

PotentialCurve gamma_zero_potential(const Profile& p, const GridSpec& spec) {
    const auto limit = p.asymptotic_curvature();
    if (!limit)
        throw UnsupportedLimitError("f''/f of profile " + p.family_name() + " diverges at infinity");
    PotentialCurve out{symmetric_grid(spec), {}};
    if (spec.x_max > p.domain_half_width())
        throw ParameterError("grid extends beyond the tabulated profile range");
    const std::size_t mid = out.grid.size() / 2;
    out.v.resize(out.grid.size());
    for (std::size_t k = 0; k <= mid; ++k) {
        const auto v = p.eval(out.grid[mid + k]);
        out.v[mid + k] = out.v[mid - k] = v.d2f / v.f - *limit;
    }
    return out;
}

StateJet state_jet(const DegeneratePair& pair, State which, std::size_t i) {
    const auto v = pair.profile.eval(pair.grid[i]);
    const double gamma = pair.config.gamma;
    const double g = pair.phase[i];
    const double g1 = gamma / (v.f * v.f);
    const double g2 = -2.0 * gamma * v.df / (v.f * v.f * v.f);
    const double c = std::cos(g);
    const double s = std::sin(g);
    if (which == State::Plus) {
        return {v.f * c, v.df * c - v.f * g1 * s,
                (v.d2f - v.f * g1 * g1) * c - (2.0 * v.df * g1 + v.f * g2) * s};
    }
    const double b = pair.config.b_coeff;
    return {b * v.f * s, b * (v.df * s + v.f * g1 * c),
            b * ((v.d2f - v.f * g1 * g1) * s + (2.0 * v.df * g1 + v.f * g2) * c)};
}

StateSample evaluate_state(const DegeneratePair& pair, State which, double x) {
    const double lo = pair.grid.front();
    const double hi = pair.grid.back();
    if (x < lo || x > hi) throw ParameterError("evaluation point outside the pair's grid");

    // Continue the phase from the nearest node rather than from the origin.
    const double h = pair.spacing();
    const auto j = static_cast<std::size_t>(std::clamp(std::round((x - lo) / h), 0.0,
                                                        static_cast<double>(pair.grid.size() - 1)));
    const double gamma = pair.config.gamma;
    double g = pair.phase[j];
    if (x != pair.grid[j] && gamma != 0.0) {
        auto inv_f2 = [&pair](double t) {
            const double f = pair.profile.value(t);
            return 1.0 / (f * f);
        };
        g += gamma * quad::integrate(inv_f2, pair.grid[j], x, 1e-15).value;
    }
    const auto v = pair.profile.eval(x);
    const double g1 = gamma / (v.f * v.f);
    const double c = std::cos(g);
    const double s = std::sin(g);
    if (which == State::Plus) return {v.f * c, v.df * c - v.f * g1 * s};
    const double b = pair.config.b_coeff;
    return {b * v.f * s, b * (v.df * s + v.f * g1 * c)};
}

} // namespace degen
