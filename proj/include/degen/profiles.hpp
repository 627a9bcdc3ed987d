#pragma once

#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace degen {

/// f(x) = sech(x)^(nu/2). With gamma^2 = A1 this generates the volcano
/// potential -(A1 cosh^(2 nu) x + A2 sech^2 x).
struct SechPower {
    double nu = 1.0;
};

/// f(x) = exp(-alpha x^2).
struct Gaussian {
    double alpha = 1.0;
};

/// f(x) = a / sqrt(1 + x^2).
struct LorentzSqrt {
    double a = 1.0;
};

/// Sampled f on a symmetric, strictly increasing abscissa. Interpolated by a
/// natural cubic spline; evaluation is restricted to the sampled range.
struct Tabulated {
    std::vector<double> x;
    std::vector<double> f;
};

using FamilySpec = std::variant<SechPower, Gaussian, LorentzSqrt, Tabulated>;

/// f and its first two derivatives at one point.
struct ProfileValue {
    double f = 0.0;
    double df = 0.0;
    double d2f = 0.0;
};

class TabulatedSpline;

/// Positive, even, square-integrable envelope f. Immutable; evaluation is
/// pure and safe to share across threads.
class Profile {
public:
    ProfileValue eval(double x) const;
    double value(double x) const { return eval(x).f; }

    /// Canonical family name: "sech-power", "gaussian", "lorentz", "tabulated".
    std::string family_name() const;

    /// Largest |x| at which the profile may be evaluated (infinite for
    /// analytic families).
    double domain_half_width() const;

    /// lim_{|x|->inf} f''/f when finite. Used to anchor the potential so
    /// that its gamma-independent part vanishes at infinity.
    std::optional<double> asymptotic_curvature() const;

    /// Antiderivative of 1/f^2 with value 0 at the origin, when known in
    /// closed form.
    std::optional<std::function<double(double)>> inverse_square_antiderivative() const;

    const FamilySpec& spec() const noexcept { return spec_; }

private:
    friend Profile make_profile(const FamilySpec& spec);
    Profile(FamilySpec spec, std::shared_ptr<const TabulatedSpline> spline);

    FamilySpec spec_;
    std::shared_ptr<const TabulatedSpline> spline_;
};

/// Validates parameters (all strictly positive; tables symmetric, strictly
/// increasing and positive) and returns the profile. Throws ParameterError.
Profile make_profile(const FamilySpec& spec);

/// Whether g(x) = gamma * int_0^x dx'/f^2 has a closed form for this profile.
struct PhaseClosedForm {
    bool available = false;
    std::function<double(double)> g_exact;
};

PhaseClosedForm phase_closed_form(const Profile& p, double gamma);

/// Integral of f^2 over the real line, absolute error <= tol.
double norm_squared(const Profile& p, double tol);

/// Integral of an even, non-negative density over the real line, with the
/// same tail handling as norm_squared. Throws DivergenceError when the tail
/// does not settle.
double integrate_even_density(const std::function<double(double)>& density, double tol);

/// Two whitespace-separated columns (x, f). Lines starting with '#' are
/// skipped.
Tabulated read_table(const std::filesystem::path& path);

/// Reads column `column` of a comma-separated file with a header row as f,
/// against column "x".
Tabulated read_csv_column(const std::filesystem::path& path, const std::string& column);

} // namespace degen
