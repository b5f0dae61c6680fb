#include "eprx/acceptance.hpp"
#include "eprx/config.hpp"
#include "eprx/errors.hpp"
#include "eprx/sweep.hpp"
#include "eprx/validation.hpp"

#include <doctest.h>

#include <cmath>
#include <sstream>

using namespace eprx;

namespace {

ExperimentConfig parse(const std::string& text) {
    return experiment_from(KeyValueConfig::parse(text));
}

std::vector<std::string> split_lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);) {
        out.push_back(line);
    }
    return out;
}

}  // namespace

TEST_CASE("config grammar: comments, sections, quotes") {
    const auto kv = KeyValueConfig::parse("# comment\nstate = number\n[trap]\nomega = 2.5  # inline\n"
                                          "[output]\nplot = \"false\"\n");
    CHECK(kv.get_string("state", "") == "number");
    CHECK(kv.get_double("trap.omega", 0.0) == 2.5);
    CHECK_FALSE(kv.get_bool("output.plot", true));
    CHECK_THROWS_AS(KeyValueConfig::parse("[broken\n"), ConfigError);
    CHECK_THROWS_AS(KeyValueConfig::parse("novalue\n"), ConfigError);
}

TEST_CASE("config validation") {
    CHECK_THROWS_AS(parse("state = number\npath = analytic\n").validate(), ConfigError);
    CHECK_THROWS_AS(parse("state = coherent\nalpha_sq = 1\nbogus = 3\n"), ConfigError);
    CHECK_THROWS_AS(parse("state = number\nN = 1.5\n").validate(), ConfigError);
    CHECK_THROWS_AS(parse("state = coherent\nalpha_sq = 1\ntol.tail = 0\n").validate(), ConfigError);
    CHECK_THROWS_AS(parse("state = number\nN = 2\npath = exact\nK = 30\nfock.n_max = 4\n").validate(), ConfigError);
    const auto c = parse("state = number\nN = 1,2\nK = 64\n");
    CHECK(c.modes == 64);
    CHECK(c.values.size() == 2);
    CHECK_NOTHROW(c.validate());
}

TEST_CASE("analytic sweep reproduces the number-state closed form rowwise") {
    auto c = parse("state = number\nN = 1,2,3,4,5,6,7,8,9,10\npath = analytic\n");
    const auto r = run_sweep(c);
    REQUIRE(r.rows.size() == 10);
    for (const auto& row : r.rows) {
        CHECK(row.error.empty());
        CHECK(row.mu == doctest::Approx((*row.parameter - 1.0) / (2.0 * (*row.parameter + 1.0))).epsilon(1e-14));
    }
}

TEST_CASE("analytic coherent sweep") {
    const auto r = run_sweep(parse("state = coherent\nalpha_sq = 1,2,4\npath = analytic\n"));
    // Truncation at tail mass 1e-12 bounds the agreement.
    CHECK(r.rows[0].mu == doctest::Approx(1.0 / 6.0).epsilon(1e-10));
    CHECK(r.rows[1].mu == doctest::Approx(0.25).epsilon(1e-10));
    CHECK(r.rows[2].mu == doctest::Approx(1.0 / 3.0).epsilon(1e-10));
    CHECK(r.rows[1].fidelity.has_value());
}

TEST_CASE("sweep CSV: 17 digits, empty closed-form cells, error column") {
    auto c = parse("state = superposition\ncoeffs = 1,0:1\npath = analytic\n");
    std::ostringstream out;
    write_sweep_csv(run_sweep(c), out);
    const auto lines = split_lines(out.str());
    REQUIRE(lines.size() == 2);
    CHECK(lines[0].rfind("kind,parameter,K,path", 0) == 0);
    CHECK(lines[1].find("superposition,,0,analytic,") == 0);

    auto bad = parse("state = coherent\nalpha_sq = 1,400\nstate.max_cut = 40\npath = analytic\n");
    const auto r = run_sweep(bad);
    CHECK(r.rows[0].error.empty());
    CHECK_FALSE(r.rows[1].error.empty());

    CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("sweeps are deterministic regardless of worker count") {
    auto c = parse("state = thermal\nnbar = 0.1,0.5,1,2,4\nK = 128\n");
    c.workers = 1;
    std::ostringstream a, b;
    write_sweep_csv(run_sweep(c), a);
    c.workers = 3;
    write_sweep_csv(run_sweep(c), b);
    CHECK(a.str() == b.str());
}

TEST_CASE("fock and exact paths run on small problems") {
    const auto f = run_sweep(parse("state = number\nN = 2\npath = fock\nK = 4\nfock.n_max = 3\n"));
    CHECK(f.rows[0].error.empty());
    const auto e = run_sweep(parse("state = number\nN = 2\npath = exact\nK = 4\nfock.n_max = 3\n"));
    REQUIRE(e.rows[0].error.empty());
    CHECK(e.rows[0].leakage.has_value());
    CHECK(std::abs(e.rows[0].mu - f.rows[0].mu) < 5e-3);
}

TEST_CASE("power-law fit recovers an exact exponent") {
    const std::vector<double> x{1, 2, 4, 8, 16};
    std::vector<double> y;
    for (double v : x) {
        y.push_back(3.0 * std::pow(v, -2.0) * (1.0 + 1e-6 * std::sin(v)));
    }
    const auto fit = fit_power_law(x, y);
    CHECK(fit.exponent == doctest::Approx(-2.0).epsilon(1e-5));
    CHECK(fit.ci_low < fit.exponent);
    CHECK(fit.ci_high > fit.exponent);
    CHECK(fit.ci_high - fit.ci_low < 1e-4);
}

TEST_CASE("validation report contents") {
    ValidationOptions o;
    o.scaling_modes = 128;
    const auto report = run_validation(o);
    REQUIRE(report.ladder.size() == 4);
    for (std::size_t i = 1; i < report.ladder.size(); ++i) {
        CHECK(report.ladder[i].ratio >= 3.0);
        CHECK(report.ladder[i].ratio <= 5.0);
    }
    CHECK(report.residual_fit.exponent == doctest::Approx(2.0).epsilon(0.05));
    CHECK(report.default_leakage_fraction < 0.01);
    CHECK(report.scaling_fit.exponent < 0.0);
    CHECK(report.commutators.size() == 4);
    for (std::size_t i = 1; i < report.commutators.size(); ++i) {
        CHECK(report.commutators[i].product < 2.0 * report.commutators[i - 1].product);
    }
    // |0> + |1>: the single particle can be found on one side only, so no entanglement.
    CHECK(report.superpositions.front().mu < 1e-6);
    std::ostringstream out;
    write_validation_csv(report, out);
    CHECK(out.str().find("quartic_scaling_fit,exponent_alpha_sq") != std::string::npos);
}

TEST_CASE("acceptance targets by name") {
    CHECK(acceptance_targets().size() == 9);
    const auto r = run_acceptance_target("accept:structural");
    CHECK(r.passed);
    CHECK(r.csv.find("index,m_ll") == 0);
    CHECK_THROWS_AS((void)run_acceptance_target("accept:nope"), ConfigError);
}
