#include "eprx/entanglement.hpp"
#include "eprx/errors.hpp"
#include "eprx/measurement.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace eprx;

TEST_CASE("product and Bell states") {
    Eigen::MatrixXcd prod = Eigen::MatrixXcd::Zero(4, 4);
    prod(0, 0) = 1.0;
    CHECK(negativity(BipartiteDensity(2, 2, prod)) == doctest::Approx(0.0));
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
    psi(1) = psi(2) = 1.0 / std::sqrt(2.0);
    CHECK(negativity(BipartiteDensity(2, 2, psi * psi.adjoint())) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("qutrit pair maximally entangled state") {
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(9);
    for (int i = 0; i < 3; ++i) {
        psi(4 * i) = 1.0 / std::sqrt(3.0);
    }
    CHECK(negativity(BipartiteDensity(3, 3, psi * psi.adjoint())) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("invalid densities are rejected") {
    Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(4, 4);
    CHECK_THROWS_AS(BipartiteDensity(2, 2, bad), NumericalError);  // trace 4
    bad = Eigen::MatrixXcd::Zero(4, 4);
    bad(0, 0) = 1.5;
    bad(1, 1) = -0.5;
    CHECK_THROWS_AS(BipartiteDensity(2, 2, bad), NumericalError);
}

TEST_CASE("closed forms") {
    CHECK(negativity_closed_form(StateKind::Coherent, 2.0) == doctest::Approx(0.25));
    CHECK(negativity_closed_form(StateKind::Number, 1.0) == 0.0);
    CHECK(negativity_closed_form(StateKind::Number, 0.0) == 0.0);
    CHECK(negativity_closed_form(StateKind::Number, 9.0) == doctest::Approx(0.4));
    CHECK(thermal_negativity_closed_form(1.0) == doctest::Approx(0.25));
    CHECK(fidelity_closed_form(2.0) == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(fidelity_closed_form(0.01) == doctest::Approx(1.0 / std::sqrt(201.0)));
}

TEST_CASE("closed forms are monotone and bounded by 1/2") {
    double prev_n = -1.0, prev_c = -1.0;
    for (int n = 1; n <= 200; ++n) {
        const double mn = negativity_closed_form(StateKind::Number, n);
        const double mc = negativity_closed_form(StateKind::Coherent, 0.25 * n);
        if (n > 1) {
            CHECK(mn > prev_n);
        }
        CHECK(mc > prev_c);
        CHECK(mn < 0.5);
        CHECK(mc < 0.5);
        prev_n = mn;
        prev_c = mc;
    }
}

TEST_CASE("analytic limit approaches the maximal negativity and unit fidelity") {
    const auto s = make_state(StateDescriptor::coherent(std::sqrt(400.0)), 4096);
    const auto block = block_from_moments(analytic_limit_moments(s), 1e-3, ProbeParams{});
    CHECK(negativity(to_bipartite(block)) == doctest::Approx(0.5 * 400.0 / 402.0).epsilon(1e-10));
    CHECK(disturbance_fidelity_limit(s) == doctest::Approx(fidelity_closed_form(400.0)).epsilon(1e-10));
    CHECK(disturbance_fidelity_limit(s) > 0.997);
}

TEST_CASE("generic negativity equals the structural formula on random blocks") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        ProbeBlockMoments m;
        m.m_ll = u(rng) + 0.01;
        m.m_rr = u(rng) + 0.01;
        m.m_lr = std::polar(u(rng) * std::sqrt(m.m_ll * m.m_rr), 6.3 * u(rng));
        m.s = m.m_ll + m.m_rr;
        const double generic = negativity(to_bipartite(block_from_moments(m, 0.1, ProbeParams{})));
        CHECK(std::abs(generic - m.structural_negativity()) < 1e-12);
    }
}

TEST_CASE("finite-K fidelity from the extrapolated sums") {
    const auto table = cached_overlap_table(512);
    const auto sums = extrapolated_overlap_sums(table);
    for (double a2 : {0.5, 2.0, 8.0}) {
        const auto s = make_state(StateDescriptor::coherent(std::sqrt(a2)));
        CHECK(std::abs(disturbance_fidelity(s, sums) - fidelity_closed_form(a2)) < 1e-3);
    }
    CHECK_THROWS_AS((void)disturbance_fidelity(make_state(StateDescriptor::fock(0)), sums), NumericalError);
}
