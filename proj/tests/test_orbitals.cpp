#include "eprx/errors.hpp"
#include "eprx/orbitals.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/hermite.hpp>
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace eprx;

namespace {

// Independent oracle: textbook Hermite polynomial times Gaussian, integrated
// with adaptive Gauss-Kronrod on [0, inf).
double oracle_orbital(int k, double x) {
    const double log_norm = -0.5 * (k * std::log(2.0) + std::lgamma(k + 1.0) + 0.5 * std::log(M_PI));
    return std::exp(log_norm - 0.5 * x * x) * boost::math::hermite(static_cast<unsigned>(k), x);
}

double oracle_right(int k, int l) {
    auto f = [=](double x) { return oracle_orbital(k, x) * oracle_orbital(l, x); };
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, std::numeric_limits<double>::infinity(),
                                                                         15, 1e-14);
}

double binomial(int n, int k) {
    return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

}  // namespace

TEST_CASE("ground orbital at the origin") {
    CHECK(eval_orbital(0, 0.0) == doctest::Approx(std::pow(M_PI, -0.25)).epsilon(1e-15));
    CHECK(eval_orbital(1, 0.0) == 0.0);
}

TEST_CASE("orbitals match the Hermite oracle") {
    for (int k : {0, 1, 2, 5, 10, 17}) {
        for (double x : {-3.1, -0.4, 0.0, 0.9, 2.5, 5.0}) {
            CHECK(eval_orbital(k, x) == doctest::Approx(oracle_orbital(k, x)).epsilon(1e-12));
        }
    }
}

TEST_CASE("orbital scaling with m and omega") {
    const OscillatorParams p{2.0, 3.0};
    const double s = std::sqrt(6.0);
    CHECK(eval_orbital(3, 0.7, p) == doctest::Approx(std::sqrt(s) * eval_orbital(3, 0.7 * s)).epsilon(1e-13));
}

TEST_CASE("far tail underflows to zero instead of NaN") {
    CHECK(eval_orbital(4, 60.0) == 0.0);
    const auto all = eval_orbitals(200, 45.0);
    for (double v : all) {
        CHECK(std::isfinite(v));
    }
}

TEST_CASE("Gauss-Legendre rule integrates polynomials exactly") {
    const auto rule = gauss_legendre(20);
    double sum = 0.0, x38 = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        sum += rule.weights[i];
        x38 += rule.weights[i] * std::pow(rule.nodes[i], 38);
    }
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(x38 == doctest::Approx(2.0 / 39.0).epsilon(1e-13));
}

TEST_CASE("overlap table against independent quadrature") {
    const auto t = build_overlap_table(12);
    for (int k = 0; k < 12; ++k) {
        for (int l = 0; l < 12; ++l) {
            CHECK(t.right(k, l) == doctest::Approx(oracle_right(k, l)).epsilon(1e-11).scale(1.0));
        }
    }
}

TEST_CASE("overlap table frozen values and identities") {
    const auto t = build_overlap_table(64);
    CHECK(t.right(0, 1) == doctest::Approx(1.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-13));
    CHECK(t.left(0, 1) == doctest::Approx(-1.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-13));
    CHECK(t.right(0, 0) == 0.5);
    // Column 0, odd rows: lambda^2 = C(2j, j) / 4^j / (2 pi (2j + 1)).
    for (int j = 0; j < 31; ++j) {
        const double expect = binomial(2 * j, j) / std::pow(4.0, j) / (2.0 * M_PI * (2 * j + 1));
        CHECK(t.right(2 * j + 1, 0) * t.right(2 * j + 1, 0) == doctest::Approx(expect).epsilon(1e-11));
    }
    for (int k = 0; k < 64; ++k) {
        for (int l = 0; l < 64; ++l) {
            CHECK(std::abs(t.left(k, l) + t.right(k, l) - (k == l ? 1.0 : 0.0)) < 1e-12);
            CHECK(t.right(k, l) == t.right(l, k));
            if ((k + l) % 2 == 0 && k != l) {
                CHECK(t.right(k, l) == 0.0);
            }
        }
    }
    CHECK(t.quadrature_error() < 1e-12);
}

TEST_CASE("truncated table equals a smaller build") {
    const auto big = build_overlap_table(32);
    const auto small = build_overlap_table(8);
    const auto cut = big.truncated(8);
    CHECK((cut.right() - small.right()).cwiseAbs().maxCoeff() < 1e-13);
    CHECK_THROWS_AS((void)small.truncated(9), ConfigError);
}

TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS((void)build_overlap_table(0), ConfigError);
    CHECK_THROWS_AS((void)build_overlap_table(4, OscillatorParams{-1.0, 1.0}), ConfigError);
    CHECK_THROWS_AS((void)build_overlap_table(4, OscillatorParams{1.0, 0.0}), ConfigError);
}

TEST_CASE("CSV round trip and file cache") {
    const auto t = build_overlap_table(6);
    std::ostringstream out;
    write_overlap_csv(t, out);
    const auto text = out.str();
    CHECK(text.rfind("k,l,lambdaL,lambdaR\n", 0) == 0);

    const auto dir = std::filesystem::temp_directory_path() / "eprx_test_cache";
    std::filesystem::remove_all(dir);
    const auto first = cached_overlap_table(6, {}, {}, dir);
    bool found = false;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        found = found || e.path().extension() == ".csv";
        const auto back = read_overlap_csv(e.path());
        CHECK((back.right() - t.right()).cwiseAbs().maxCoeff() == 0.0);
    }
    CHECK(found);
    std::filesystem::remove_all(dir);
}
