#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cli.hpp"
#include "cli_config.hpp"
#include "degen/errors.hpp"
#include "degen/verify.hpp"
#include "support/oracles.hpp"

#include <json.hpp>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace fs = std::filesystem;
using namespace degen;

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

// Real process, for exit status and file side effects.
int run_binary(const std::string& args) {
    const std::string cmd = std::string(DEGENPAIR_BIN) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

using Table = std::map<std::string, std::vector<double>>;

Table parse_csv(const std::string& text, std::vector<std::string>* header_out = nullptr) {
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    std::vector<std::string> header;
    {
        std::istringstream h(line);
        std::string cell;
        while (std::getline(h, cell, ',')) header.push_back(cell);
    }
    Table t;
    while (std::getline(in, line)) {
        std::istringstream r(line);
        std::string cell;
        for (const auto& name : header) {
            std::getline(r, cell, ',');
            t[name].push_back(cell.empty() ? std::nan("") : std::stod(cell));
        }
    }
    if (header_out) *header_out = header;
    return t;
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "degenpair_cli_tests";
    fs::create_directories(dir);
    return dir / name;
}

std::size_t row_at_zero(const Table& t) {
    const auto& x = t.at("x");
    return static_cast<std::size_t>(std::find(x.begin(), x.end(), 0.0) - x.begin());
}

} // namespace

TEST_CASE("construct with the volcano parameters") {
    const auto r = run({"construct", "--family", "sech-power", "--nu", "1", "--a1", "0.006944", "--xmax", "6", "--n", "2001"});
    REQUIRE(r.code == 0);
    CHECK(first_line(r.out) == "x,v,psi_plus,psi_minus,energy");
    const auto t = parse_csv(r.out);
    CHECK(t.at("x").size() == 2001);
    const std::size_t o = row_at_zero(t);
    REQUIRE(o == 1000);
    CHECK(t.at("v")[o] == doctest::Approx(-0.75694).epsilon(1e-5));
    CHECK(t.at("psi_plus")[o] == 1.0);
    CHECK(t.at("psi_minus")[o] == 0.0);
    for (double e : t.at("energy")) CHECK(e == -0.25);
}

TEST_CASE("construct defaults reproduce V(0) = -109/144") {
    const auto r = run({"construct"});
    REQUIRE(r.code == 0);
    const auto t = parse_csv(r.out);
    const std::size_t o = row_at_zero(t);
    CHECK(t.at("v")[o] == doctest::Approx(-109.0 / 144.0).epsilon(1e-15));
    CHECK(t.at("x").front() == -6.0);
    CHECK(t.at("x").size() == 2001);
    for (std::size_t i = 0; i < t.at("x").size(); i += 100)
        CHECK(t.at("v")[i] == doctest::Approx(oracle::koley_kar_potential(1.0, 1.0 / 144.0, t.at("x")[i])).epsilon(1e-13));
}

TEST_CASE("construct at gamma = 0 has no odd state") {
    const auto r = run({"construct", "--family", "lorentz", "--a", "1", "--gamma", "0", "--xmax", "5", "--n", "101"});
    REQUIRE(r.code == 0);
    const auto t = parse_csv(r.out);
    for (double v : t.at("psi_minus")) CHECK(v == 0.0);
    for (std::size_t i = 0; i < t.at("x").size(); ++i)
        CHECK(t.at("psi_plus")[i] == doctest::Approx(1.0 / std::sqrt(1.0 + t.at("x")[i] * t.at("x")[i])).epsilon(1e-15));
}

TEST_CASE("CSV values round-trip at 17 digits") {
    CHECK(cli::format_double(0.1) == "0.10000000000000001");
    CHECK(cli::format_double(-0.25) == "-0.25");
    CHECK(std::stod(cli::format_double(1.0 / 3.0)) == 1.0 / 3.0);
    const auto r = run({"construct", "--family", "lorentz", "--gamma", "1", "--xmax", "2", "--n", "41"});
    const auto pair = build_pair(make_profile(LorentzSqrt{1.0}), {1.0, 1.0, EnergyRef::PotentialZeroAtOrigin}, {2.0, 41});
    const auto t = parse_csv(r.out);
    for (std::size_t i = 0; i < 41; ++i) {
        CHECK(t.at("psi_plus")[i] == pair.psi_plus[i]);
        CHECK(t.at("psi_minus")[i] == pair.psi_minus[i]);
    }
}

TEST_CASE("rational flag values") {
    CHECK(cli::parse_number("1/144", "x") == 1.0 / 144.0);
    CHECK(cli::parse_number("0.5", "x") == 0.5);
    CHECK(cli::parse_number("-3/4", "x") == -0.75);
    CHECK_THROWS_AS(cli::parse_number("1/0", "x"), ParameterError);
    CHECK_THROWS_AS(cli::parse_number("abc", "x"), ParameterError);
    CHECK_THROWS_AS(cli::parse_number("1.5x", "x"), ParameterError);
    CHECK(cli::parse_list("1e-2, 1e-3,1/10000", "x") == std::vector<double>{1e-2, 1e-3, 1e-4});
    CHECK_THROWS_AS(cli::parse_list("", "x"), ParameterError);
}

TEST_CASE("config errors exit with 2") {
    CHECK(run({"construct", "--n", "0"}).code == cli::kConfigError);
    CHECK(run({"construct", "--n", "2000"}).code == cli::kConfigError);
    CHECK(run({"construct", "--xmax", "-1"}).code == cli::kConfigError);
    CHECK(run({"construct", "--gamma", "abc"}).code == cli::kConfigError);
    CHECK(run({"construct", "--nu", "notanumber"}).code == cli::kConfigError);
    CHECK(run({"construct", "--family", "cubic"}).code == cli::kConfigError);
    CHECK(run({"construct", "--format", "xml"}).code == cli::kConfigError);
    CHECK(run({"construct", "--a1", "1/144", "--gamma", "0.1"}).code == cli::kConfigError);
    CHECK(run({"construct", "--family", "gaussian", "--energy-ref", "given", "--gamma", "1"}).code == cli::kConfigError);
    CHECK(run({"verify", "--n", "0"}).code == cli::kConfigError);
    CHECK(run({"bogus"}).code == cli::kConfigError);
    CHECK(run({}).code == cli::kConfigError);
    CHECK(run({"construct", "--no-such-flag"}).code == cli::kConfigError);
    CHECK(run({"wellscape"}).code == cli::kConfigError);
    CHECK(run({"spectrum", "--potential", "free"}).code == cli::kConfigError);
    CHECK(run({"sweep", "--gammas", "1e-3,1e-2"}).code == cli::kConfigError);
}

TEST_CASE("malformed flag writes no output file") {
    const auto path = scratch("malformed.csv");
    fs::remove(path);
    CHECK(run_binary("construct --gamma 1.2.3 --out " + path.string()) == 2);
    CHECK_FALSE(fs::exists(path));
    CHECK(run_binary("construct --n 0 --out " + path.string()) == 2);
    CHECK_FALSE(fs::exists(path));
}

TEST_CASE("unwritable output path exits with 2") {
    CHECK(run_binary("construct --out /nonexistent-dir/x/y.csv") == 2);
    CHECK(run({"figure2", "--out", "/nonexistent-dir/x/y.csv"}).code == cli::kConfigError);
}

TEST_CASE("verify on the volcano defaults passes") {
    const auto r = run({"verify"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    for (const char* key : {"residual_max_plus", "residual_max_minus", "wronskian_drift", "wronskian_value",
                            "interlace_ok", "orthogonality", "node_spacing_monotone", "slope_growth"}) {
        CAPTURE(key);
        REQUIRE(j.contains(key));
        CHECK(j[key].contains("value"));
        CHECK(j[key].contains("threshold"));
        CHECK(j[key]["pass"].get<bool>());
    }
    CHECK(j["pass"].get<bool>());
    CHECK(j["residual_max_plus"]["threshold"].get<double>() == 1e-8);
    CHECK(std::abs(j["wronskian_value"]["value"].get<double>()) == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
    const auto zp = j["witness"]["zeros_plus"].get<std::vector<double>>();
    const auto first = std::find_if(zp.begin(), zp.end(), [](double z) { return z > 0; });
    REQUIRE(first != zp.end());
    CHECK(*first == doctest::Approx(std::asinh(6.0 * M_PI)).epsilon(1e-11));
}

TEST_CASE("verify with an injected fault reports failure") {
    const auto r = run({"verify", "--inject-fault"});
    CHECK(r.code == cli::kCheckFailed);
    const auto j = nlohmann::json::parse(r.out);
    CHECK_FALSE(j["pass"].get<bool>());
    CHECK_FALSE(j["residual_max_plus"]["pass"].get<bool>());
    CHECK(run_binary("verify --inject-fault") == 1);
    CHECK(run_binary("verify --family lorentz --gamma 1") == 0);
}

TEST_CASE("wellscape reports") {
    const auto inside = nlohmann::json::parse(run({"wellscape", "--a", "1", "--gamma-sq", "0.01"}).out);
    CHECK(inside["regime"] == "WellStatesInside");
    CHECK(inside["z_root"].get<double>() > 1.0);
    CHECK(inside["barrier_height_rel"].get<double>() > 0.0);

    const auto convex = nlohmann::json::parse(run({"wellscape", "--gamma-sq", "2"}).out);
    CHECK(convex["regime"] == "ConvexNoWell");
    CHECK(convex["z_root"].is_null());

    const auto critical = nlohmann::json::parse(run({"wellscape", "--gamma-sq", "1/16"}).out);
    CHECK(critical["regime"] == "CriticalBoundary");
    CHECK(critical["z_root"].get<double>() == 1.0);
    CHECK(nlohmann::json::parse(run({"wellscape", "--gamma", "1/4"}).out)["regime"] == "CriticalBoundary");

    const auto sweep = run({"wellscape", "--sweep-gamma-sq", "0.001,0.05,0.5,1.9,3"});
    REQUIRE(sweep.code == 0);
    std::istringstream in(sweep.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "gamma_sq,regime,z,x_max,barrier");
    std::vector<std::string> regimes;
    while (std::getline(in, line)) regimes.push_back(line.substr(line.find(',') + 1, line.find(',', line.find(',') + 1) - line.find(',') - 1));
    CHECK(regimes == std::vector<std::string>{"WellStatesInside", "WellStatesInside", "WellStatesAbove", "WellStatesAbove",
                                              "ConvexNoWell"});
    CHECK(sweep.out.find("3,ConvexNoWell,,,\n") != std::string::npos);
}

TEST_CASE("spectrum subcommand") {
    const auto free_box = nlohmann::json::parse(
        run({"spectrum", "--potential", "free", "--L", "3.141592653589793", "--step", "1e-3", "--parity", "even", "--e-lo",
             "0.1", "--e-hi", "3"})
            .out);
    const auto ev = free_box["even"]["eigenvalues"].get<std::vector<double>>();
    REQUIRE(ev.size() == 2);
    CHECK(ev[0] == doctest::Approx(0.25).epsilon(1e-8));
    CHECK(ev[1] == doctest::Approx(2.25).epsilon(1e-8));

    const auto empty = nlohmann::json::parse(
        run({"spectrum", "--potential", "free", "--L", "3.141592653589793", "--step", "1e-3", "--parity", "even", "--e-lo",
             "0.3", "--e-hi", "2"})
            .out);
    CHECK(empty["even"]["empty"].get<bool>());

    const auto trace = scratch("trace.csv");
    const auto kk = run({"spectrum", "--parity", "even", "--trace", trace.string()});
    REQUIRE(kk.code == 0);
    const auto j = nlohmann::json::parse(kk.out);
    CHECK(j["half_width"].get<double>() == doctest::Approx(std::asinh(6.0 * M_PI)).epsilon(1e-12));
    const auto kev = j["even"]["eigenvalues"].get<std::vector<double>>();
    REQUIRE(kev.size() == 1);
    CHECK(std::abs(kev[0] + 0.25) <= 1e-4);
    const auto t = parse_csv(slurp(trace));
    CHECK(t.at("psi").front() == 1.0);
    CHECK(t.at("x").back() == doctest::Approx(std::asinh(6.0 * M_PI)).epsilon(1e-12));

    const auto both = nlohmann::json::parse(run({"spectrum"}).out);
    CHECK(both["even"]["eigenvalues"].size() >= 1);
    CHECK(both["odd"]["eigenvalues"].size() >= 1);
    CHECK(both["splitting"].get<double>() > 0.0);

    const auto csv = run({"spectrum", "--parity", "even", "--format", "csv"});
    CHECK(first_line(csv.out) == "parity,eigenvalue");
}

TEST_CASE("figure2 curve") {
    const auto r = run({"figure2"});
    REQUIRE(r.code == 0);
    CHECK(first_line(r.out) == "x,v");
    const auto t = parse_csv(r.out);
    const std::size_t o = row_at_zero(t);
    CHECK(t.at("v")[o] == -1.0);
    CHECK(std::abs(t.at("v").back()) < 0.02);
    // Monotone tail beyond |x| = sqrt 2.
    for (std::size_t i = 0; i + 1 < t.at("x").size(); ++i) {
        const double x = t.at("x")[i];
        if (x > std::sqrt(2.0) + 0.01) CHECK(t.at("v")[i + 1] < t.at("v")[i]);
        if (x < -std::sqrt(2.0) - 0.01 && t.at("x")[i + 1] < -std::sqrt(2.0)) CHECK(t.at("v")[i + 1] > t.at("v")[i]);
    }
}

TEST_CASE("sweep subcommand") {
    const auto r = run({"sweep", "--family", "lorentz"});
    REQUIRE(r.code == 0);
    CHECK(first_line(r.out) == "gamma,ratio");
    CHECK(r.err.find("slope") != std::string::npos);
    const auto j = nlohmann::json::parse(run({"sweep", "--family", "sech-power", "--format", "json"}).out);
    CHECK(std::abs(j["slope"].get<double>() - 2.0) <= 0.05);
}

TEST_CASE("identical configs give identical bytes") {
    for (const std::vector<std::string>& args :
         {std::vector<std::string>{"construct"}, {"figure2"}, {"verify"}, {"wellscape", "--gamma-sq", "0.01"},
          {"sweep"}, {"spectrum", "--parity", "even"}}) {
        CHECK(run(args).out == run(args).out);
    }
    const auto a = scratch("det_a.csv"), b = scratch("det_b.csv");
    REQUIRE(run_binary("construct --out " + a.string()) == 0);
    REQUIRE(run_binary("construct --out " + b.string()) == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(slurp(a) == run({"construct"}).out);
}

TEST_CASE("config file with flag overrides") {
    const auto cfg = scratch("run.ini");
    {
        std::ofstream f(cfg);
        f << "family = lorentz\na = 1\ngamma = 0.5\nxmax = 1\nn = 5\n";
    }
    const auto from_file = parse_csv(run({"construct", "--config", cfg.string()}).out);
    CHECK(from_file.at("x").size() == 5);
    CHECK(from_file.at("energy")[0] == doctest::Approx(1.25));
    const auto overridden = parse_csv(run({"construct", "--config", cfg.string(), "--gamma", "0", "--n", "7"}).out);
    CHECK(overridden.at("x").size() == 7);
    CHECK(overridden.at("energy")[0] == doctest::Approx(1.0));
    for (double v : overridden.at("psi_minus")) CHECK(v == 0.0);
    CHECK(run({"construct", "--config", scratch("missing.ini").string()}).code == cli::kConfigError);
}

TEST_CASE("constructed CSV re-enters as a tabulated profile") {
    const auto path = scratch("lorentz_gamma0.csv");
    REQUIRE(run({"construct", "--family", "lorentz", "--gamma", "0", "--xmax", "8", "--n", "4001", "--out", path.string()})
                .code == 0);

    const auto table = read_csv_column(path, "psi_plus");
    const auto tab = make_profile(table);
    const auto exact = make_profile(LorentzSqrt{1.0});
    for (double x : {-6.5, -1.0, 0.0, 0.25, 3.3, 7.9}) CHECK(tab.value(x) == doctest::Approx(exact.value(x)).epsilon(1e-10));

    // Rebuild a pair from the table and run it through the battery.
    const auto r = run({"verify", "--family", "tabulated", "--table-csv", path.string(), "--gamma", "1", "--xmax", "6",
                        "--n", "4001"});
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["wronskian_drift"]["pass"].get<bool>());
    CHECK(j["interlace_ok"]["pass"].get<bool>());
    CHECK(j["orthogonality"]["pass"].get<bool>());
    // Zeros agree with the analytic Lorentzian phase.
    const auto zp = j["witness"]["zeros_plus"].get<std::vector<double>>();
    const auto want = oracle::phase_zeros([](double x) { return x * x * x / 3 + x; }, 0.0, 6.0, 0.5);
    std::vector<double> positive;
    for (double z : zp)
        if (z > 0) positive.push_back(z);
    REQUIRE(positive.size() == want.size());
    for (std::size_t k = 0; k < want.size(); ++k) CHECK(positive[k] == doctest::Approx(want[k]).epsilon(1e-7));

    CHECK(run({"construct", "--family", "tabulated", "--table-csv", path.string(), "--table-column", "nope"}).code ==
          cli::kConfigError);
    CHECK(run({"construct", "--family", "tabulated", "--table-csv", path.string(), "--table-column", "psi_minus"}).code ==
          cli::kConfigError);
}

TEST_CASE("numerical failures exit with 3") {
    // Bisection tolerance far below what a double can resolve near E.
    CHECK(run({"spectrum", "--potential", "free", "--L", "1", "--step", "1e-3", "--e-lo", "0", "--e-hi", "1e6"}).code ==
          cli::kConfigError);
    const auto r = run({"spectrum", "--potential", "free", "--L", "30", "--step", "3e-4", "--parity", "even", "--e-lo",
                        "-1e6", "--e-hi", "-9.99e5"});
    CHECK(r.code == cli::kNumericalError);
}
