#pragma once

#include "degen/profiles.hpp"

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace degen {

enum class Parity { Even, Odd };

/// psi'' = (V - E) psi on [0, L] with a hard wall at L and parity data at 0.
/// The step is shrunk so that L is an exact multiple of it.
struct BoxProblem {
    std::function<double(double)> potential;
    double half_width = 1.0;
    double step = 1e-3;
    Parity parity = Parity::Even;
};

struct NumerovTrace {
    std::vector<double> x;
    std::vector<double> psi;
    double psi_at_wall = 0.0;
    double slope_at_wall = 0.0;
    int nodes = 0;     ///< sign changes in (0, L]
    int rescales = 0;
};

/// Samples the potential once and shoots at any number of energies.
class ShootingSolver {
public:
    explicit ShootingSolver(const BoxProblem& prob);

    /// Throws ParameterError when h sqrt(max |E - V|) > 2 pi / 20.
    void check_resolution(double energy) const;
    NumerovTrace integrate(double energy) const;

    double step() const { return h_; }
    Parity parity() const { return parity_; }

private:
    Parity parity_;
    double h_;
    std::vector<double> x_;
    std::vector<double> v_;
};

NumerovTrace numerov_integrate(const BoxProblem& prob, double energy);

struct SpectrumResult {
    std::vector<double> eigenvalues; ///< sorted
    bool empty = false;              ///< no eigenvalue in the window
    std::optional<double> splitting; ///< |E_even - E_odd| nearest the reference energy
};

/// All eigenvalues of one parity in (e_lo, e_hi), isolated by node counting
/// and refined by bisection on psi(L; E) to tol_e.
SpectrumResult eigen_bisect(const BoxProblem& prob, double e_lo, double e_hi, double tol_e);

struct PairedSpectrum {
    SpectrumResult even;
    SpectrumResult odd;
    std::optional<double> splitting;
};

/// Even then odd run over the same window; splitting between the levels of
/// each parity nearest e_ref.
PairedSpectrum paired_spectrum(BoxProblem prob, double e_lo, double e_hi, double tol_e, double e_ref);

/// Distance from `energy` to the nearest other level of the same parity,
/// from node counts of trial integrations at energy +/- d (d grown from
/// delta, then bisected).
double estimate_level_spacing(const BoxProblem& prob, double energy, double delta);

struct CollapseRow {
    double gamma = 0.0;
    double ratio = 0.0; ///< int psi_minus^2 / (B^2 int f^2) over [-X, X]
};

struct CollapseStudy {
    std::vector<CollapseRow> rows;
    double slope = 0.0; ///< least-squares d log(ratio) / d log(gamma)
    bool slope_ok = false;
};

inline constexpr double kCollapseSlope = 2.0;
inline constexpr double kCollapseSlopeTol = 0.05;

/// Weight of the odd state in [-X, X] as gamma shrinks. gammas must be
/// positive and strictly decreasing.
CollapseStudy gamma_collapse_study(const Profile& p, std::span<const double> gammas, double window_x);

} // namespace degen
