#include "degen/profiles.hpp"

#include "degen/errors.hpp"
#include "degen/quadrature.hpp"

#include <gsl/gsl_spline.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

namespace degen {

class TabulatedSpline {
public:
    explicit TabulatedSpline(const Tabulated& t)
        : x_(t.x), spline_(gsl_spline_alloc(gsl_interp_cspline, t.x.size())) {
        if (!spline_ || gsl_spline_init(spline_.get(), t.x.data(), t.f.data(), t.x.size()) != 0)
            throw ParameterError("tabulated profile: spline construction failed");
    }

    // No gsl_interp_accel: lookups use binary search, which keeps evaluation
    // free of mutable state.
    ProfileValue eval_nonneg(double ax) const {
        return {gsl_spline_eval(spline_.get(), ax, nullptr),
                gsl_spline_eval_deriv(spline_.get(), ax, nullptr),
                gsl_spline_eval_deriv2(spline_.get(), ax, nullptr)};
    }

    double half_width() const { return x_.back(); }
    const std::vector<double>& knots() const { return x_; }

private:
    struct Deleter {
        void operator()(gsl_spline* s) const { gsl_spline_free(s); }
    };
    std::vector<double> x_;
    std::unique_ptr<gsl_spline, Deleter> spline_;
};

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

ProfileValue eval_sech_power(double nu, double ax) {
    // exp(-2|x|) keeps sech^2 and tanh accurate far into the tail.
    const double e = std::exp(-2.0 * ax);
    const double tanh_x = (1.0 - e) / (1.0 + e);
    const double sech2 = 4.0 * e / ((1.0 + e) * (1.0 + e));
    const double log_cosh = ax + std::log1p(e) - std::log(2.0);
    const double half = 0.5 * nu;
    const double f = std::exp(-half * log_cosh);
    return {f, -half * tanh_x * f, f * (half * half * tanh_x * tanh_x - half * sech2)};
}

ProfileValue eval_gaussian(double alpha, double ax) {
    const double f = std::exp(-alpha * ax * ax);
    return {f, -2.0 * alpha * ax * f, (4.0 * alpha * alpha * ax * ax - 2.0 * alpha) * f};
}

ProfileValue eval_lorentz(double a, double ax) {
    const double s = 1.0 + ax * ax;
    const double f = a / std::sqrt(s);
    return {f, -ax * f / s, (2.0 * ax * ax - 1.0) * f / (s * s)};
}

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
        throw ParameterError(std::string("profile parameter ") + name + " must be positive and finite");
}

void validate_table(const Tabulated& t) {
    const std::size_t n = t.x.size();
    if (n < 5) throw ParameterError("tabulated profile needs at least 5 samples");
    if (t.f.size() != n) throw ParameterError("tabulated profile: x and f lengths differ");
    for (std::size_t i = 0; i + 1 < n; ++i)
        if (!(t.x[i + 1] > t.x[i])) throw ParameterError("tabulated profile: x must be strictly increasing");
    const double span = t.x.back();
    const double fmax = *std::max_element(t.f.begin(), t.f.end());
    for (std::size_t i = 0; i < n; ++i) {
        if (!(t.f[i] > 0.0)) throw ParameterError("tabulated profile: f must be positive");
        const std::size_t j = n - 1 - i;
        if (std::abs(t.x[i] + t.x[j]) > 1e-9 * span)
            throw ParameterError("tabulated profile: x range must be symmetric about 0");
        if (std::abs(t.f[i] - t.f[j]) > 1e-9 * fmax)
            throw ParameterError("tabulated profile: f must be even");
    }
}

} // namespace

Profile::Profile(FamilySpec spec, std::shared_ptr<const TabulatedSpline> spline)
    : spec_(std::move(spec)), spline_(std::move(spline)) {}

Profile make_profile(const FamilySpec& spec) {
    std::shared_ptr<const TabulatedSpline> spline;
    std::visit(overloaded{
                   [](const SechPower& s) { require_positive(s.nu, "nu"); },
                   [](const Gaussian& g) { require_positive(g.alpha, "alpha"); },
                   [](const LorentzSqrt& l) { require_positive(l.a, "a"); },
                   [&](const Tabulated& t) {
                       validate_table(t);
                       spline = std::make_shared<const TabulatedSpline>(t);
                   },
               },
               spec);
    Profile p(spec, spline);
    if (spline) {
        // The spline may undershoot between positive samples.
        const auto& k = spline->knots();
        for (std::size_t i = 0; i + 1 < k.size(); ++i) {
            if (k[i + 1] <= 0.0) continue;
            for (int s = 0; s <= 8; ++s) {
                const double x = std::max(0.0, k[i] + (k[i + 1] - k[i]) * s / 8.0);
                if (!(spline->eval_nonneg(x).f > 0.0))
                    throw ParameterError("tabulated profile: interpolant is not positive");
            }
        }
    }
    return p;
}

ProfileValue Profile::eval(double x) const {
    const double ax = std::abs(x);
    const double sign = x < 0.0 ? -1.0 : 1.0;
    ProfileValue v = std::visit(overloaded{
                                    [&](const SechPower& s) { return eval_sech_power(s.nu, ax); },
                                    [&](const Gaussian& g) { return eval_gaussian(g.alpha, ax); },
                                    [&](const LorentzSqrt& l) { return eval_lorentz(l.a, ax); },
                                    [&](const Tabulated&) {
                                        if (ax > spline_->half_width())
                                            throw ParameterError("tabulated profile evaluated outside its table");
                                        return spline_->eval_nonneg(ax);
                                    },
                                },
                                spec_);
    v.df *= sign;
    return v;
}

std::string Profile::family_name() const {
    return std::visit(overloaded{
                          [](const SechPower&) { return std::string("sech-power"); },
                          [](const Gaussian&) { return std::string("gaussian"); },
                          [](const LorentzSqrt&) { return std::string("lorentz"); },
                          [](const Tabulated&) { return std::string("tabulated"); },
                      },
                      spec_);
}

double Profile::domain_half_width() const {
    return spline_ ? spline_->half_width() : std::numeric_limits<double>::infinity();
}

std::optional<double> Profile::asymptotic_curvature() const {
    return std::visit(overloaded{
                          [](const SechPower& s) -> std::optional<double> { return s.nu * s.nu / 4.0; },
                          [](const Gaussian&) -> std::optional<double> { return std::nullopt; },
                          [](const LorentzSqrt&) -> std::optional<double> { return 0.0; },
                          [](const Tabulated&) -> std::optional<double> { return std::nullopt; },
                      },
                      spec_);
}

std::optional<std::function<double(double)>> Profile::inverse_square_antiderivative() const {
    using Fn = std::function<double(double)>;
    return std::visit(overloaded{
                          [](const SechPower& s) -> std::optional<Fn> {
                              if (s.nu == 1.0) return Fn([](double x) { return std::sinh(x); });
                              if (s.nu == 2.0)
                                  return Fn([](double x) { return 0.5 * x + 0.25 * std::sinh(2.0 * x); });
                              return std::nullopt;
                          },
                          [](const Gaussian&) -> std::optional<Fn> { return std::nullopt; },
                          [](const LorentzSqrt& l) -> std::optional<Fn> {
                              const double a2 = l.a * l.a;
                              return Fn([a2](double x) { return (x * x * x / 3.0 + x) / a2; });
                          },
                          [](const Tabulated&) -> std::optional<Fn> { return std::nullopt; },
                      },
                      spec_);
}

PhaseClosedForm phase_closed_form(const Profile& p, double gamma) {
    auto anti = p.inverse_square_antiderivative();
    if (!anti) return {};
    return {true, [gamma, fn = std::move(*anti)](double x) { return gamma * fn(x); }};
}

double integrate_even_density(const std::function<double(double)>& density, double tol) {
    if (!(tol > 0.0)) throw ParameterError("tolerance must be positive");
    return 2.0 * quad::integrate_to_infinity(density, 0.0, 0.5 * tol).value;
}

double norm_squared(const Profile& p, double tol) {
    if (!(tol > 0.0)) throw ParameterError("tolerance must be positive");
    auto f2 = [&p](double x) {
        const double f = p.value(x);
        return f * f;
    };
    if (!std::holds_alternative<Tabulated>(p.spec())) return integrate_even_density(f2, tol);

    // Compact support: integrate knot to knot over the right half.
    const auto& x = std::get<Tabulated>(p.spec()).x;
    const double piece_tol = tol / (2.0 * static_cast<double>(x.size()));
    double sum = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double lo = std::max(0.0, x[i]);
        if (x[i + 1] <= lo) continue;
        sum += quad::integrate(f2, lo, x[i + 1], piece_tol).value;
    }
    return 2.0 * sum;
}

namespace {

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open profile table " + path.string());
    return in;
}

double parse_number(const std::string& token, const std::filesystem::path& path) {
    try {
        std::size_t used = 0;
        const double v = std::stod(token, &used);
        if (used != token.size()) throw std::invalid_argument(token);
        return v;
    } catch (const std::exception&) {
        throw ParameterError("malformed number '" + token + "' in " + path.string());
    }
}

} // namespace

Tabulated read_table(const std::filesystem::path& path) {
    auto in = open_or_throw(path);
    Tabulated t;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string a, b, extra;
        if (!(ls >> a) || a.front() == '#') continue;
        if (!(ls >> b) || (ls >> extra)) throw ParameterError("expected two columns in " + path.string());
        t.x.push_back(parse_number(a, path));
        t.f.push_back(parse_number(b, path));
    }
    return t;
}

Tabulated read_csv_column(const std::filesystem::path& path, const std::string& column) {
    auto in = open_or_throw(path);
    auto split = [](const std::string& line) {
        std::vector<std::string> out;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) out.push_back(cell);
        return out;
    };
    std::string line;
    if (!std::getline(in, line)) throw ParameterError("empty csv " + path.string());
    const auto header = split(line);
    const auto col_of = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw ParameterError("csv " + path.string() + " lacks column " + name);
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t cx = col_of("x");
    const std::size_t cf = col_of(column);

    Tabulated t;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != header.size()) throw ParameterError("ragged row in " + path.string());
        t.x.push_back(parse_number(cells[cx], path));
        t.f.push_back(parse_number(cells[cf], path));
    }
    return t;
}

} // namespace degen
