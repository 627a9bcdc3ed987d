#pragma once

#include "degen/profiles.hpp"

#include <functional>
#include <span>
#include <vector>

namespace degen {

/// How the additive energy constant is fixed.
enum class EnergyRef {
    PotentialZeroAtOrigin, ///< V(0) = 0
    PotentialAsGiven,      ///< gamma-independent part of V vanishes at infinity
};

enum class State { Plus, Minus };

struct PairConfig {
    double gamma = 0.0;  ///< Wronskian over B; gamma = 0 loses the odd state
    double b_coeff = 1.0;
    EnergyRef energy_ref = EnergyRef::PotentialZeroAtOrigin;
};

/// Uniform grid on [-x_max, x_max]; n_points must be odd so x = 0 is a node.
struct GridSpec {
    double x_max = 8.0;
    int n_points = 4001;
};

/// The sampled pair psi_plus = f cos g, psi_minus = B f sin g with
/// g = gamma * int_0^x f^-2 and V - E = f''/f - gamma^2/f^4.
struct DegeneratePair {
    Profile profile;
    PairConfig config;
    std::vector<double> grid;
    std::vector<double> v_minus_e;
    std::vector<double> phase;
    std::vector<double> psi_plus;
    std::vector<double> psi_minus;
    double energy = 0.0;
    double wronskian_const = 0.0; ///< psi_minus psi_plus' - psi_plus psi_minus' = -B gamma

    double spacing() const { return grid[1] - grid[0]; }
    std::size_t origin_index() const { return grid.size() / 2; }
    std::span<const double> state(State s) const { return s == State::Plus ? psi_plus : psi_minus; }
    std::vector<double> potential() const;
};

struct PotentialCurve {
    std::vector<double> grid;
    std::vector<double> v;
};

std::vector<double> symmetric_grid(const GridSpec& spec);

/// g(x) = gamma * int_0^x dx'/f^2. Uses the closed form when the profile has
/// one, otherwise adaptive quadrature (absolute error <= tol, or 1e-13
/// relative for large |g|).
double phase(const Profile& p, const PairConfig& cfg, double x, double tol);

/// Positive x with g(x) = target_phase (target > 0, gamma > 0), by
/// bracketing and bisection on the phase. Used to place hard walls on nodes.
double node_position(const Profile& p, double gamma, double target_phase, double tol = 1e-13);

/// Quadrature route for g regardless of closed-form availability.
double phase_quadrature(const Profile& p, double gamma, double x, double tol);

/// f''/f - gamma^2/f^4 at x.
double v_minus_e_at(const Profile& p, double gamma, double x);

/// Degenerate energy implied by the configured reference convention.
double pair_energy(const Profile& p, const PairConfig& cfg);

/// Absolute potential V(x) as a callable, for solvers that never see the pair.
std::function<double(double)> potential_function(const Profile& p, const PairConfig& cfg);

DegeneratePair build_pair(const Profile& p, const PairConfig& cfg, const GridSpec& grid,
                          double phase_tol = 1e-12);

/// V = -(A1 cosh^(2 nu) x + A2 sech^2 x), A2 = (nu/2)(nu/2 + 1), E = -nu^2/4.
DegeneratePair koley_kar_pair(double nu, double a1, const GridSpec& grid);

inline double koley_kar_a2(double nu) { return 0.5 * nu * (0.5 * nu + 1.0); }

/// f''/f minus its limit at infinity, which makes f a zero-energy bound state.
/// Throws UnsupportedLimitError when f''/f has no finite limit.
PotentialCurve gamma_zero_potential(const Profile& p, const GridSpec& grid);

/// Value and first derivative of one state at an arbitrary x inside the grid.
struct StateSample {
    double value = 0.0;
    double slope = 0.0;
};

StateSample evaluate_state(const DegeneratePair& pair, State which, double x);

/// Analytic psi, psi', psi'' at grid node i, built from f, f', f'' and the
/// stored phase.
struct StateJet {
    double value = 0.0;
    double slope = 0.0;
    double curvature = 0.0;
};

StateJet state_jet(const DegeneratePair& pair, State which, std::size_t i);

} // namespace degen
