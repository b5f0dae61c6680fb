#include "eprx/errors.hpp"
#include "eprx/moments.hpp"

#include <doctest.h>

#include <cmath>

using namespace eprx;

TEST_CASE("analytic limit sums") {
    const auto s = limit_overlap_sums();
    CHECK(s.t_ll == 0.5);
    CHECK(s.t_rr == 0.5);
    CHECK(s.t_lr == 0.0);
}

TEST_CASE("finite-K sums approach the limit slowly and extrapolation closes the gap") {
    const auto table = cached_overlap_table(512);
    const auto raw = overlap_sums(table);
    CHECK(raw.t_ll + raw.t_lr == doctest::Approx(0.5).epsilon(1e-12));  // row 0 of Lambda_L sums to lambda00
    CHECK(raw.t_lr > 1e-3);
    CHECK(overlap_sums(table, 64).t_lr > raw.t_lr);
    const auto ex = extrapolated_overlap_sums(table);
    CHECK(std::abs(ex.t_lr) < 1e-8);
    CHECK(ex.t_ll == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(ex.error_estimate < 1e-6);
    CHECK_THROWS_AS((void)extrapolated_overlap_sums(cached_overlap_table(100)), ConfigError);
}

TEST_CASE("closed-form moments of a number state") {
    // N |N>: m_ll = N T_ll + N(N-1)/4, m_lr = N T_lr + N(N-1)/4.
    const auto table = build_overlap_table(16);
    const auto sums = overlap_sums(table);
    const auto m = moments_from_state(make_state(StateDescriptor::fock(3)), table);
    CHECK(m.m_ll == doctest::Approx(3 * sums.t_ll + 1.5).epsilon(1e-13));
    CHECK(m.m_lr.real() == doctest::Approx(3 * sums.t_lr + 1.5).epsilon(1e-13));
    CHECK(m.m_lr.imag() == 0.0);
    CHECK(m.s == doctest::Approx(m.m_ll + m.m_rr));
}

TEST_CASE("probe symmetry: left and right moments agree") {
    const auto table = build_overlap_table(32);
    for (const auto& d : {StateDescriptor::fock(4), StateDescriptor::coherent({0.3, 1.1}), StateDescriptor::thermal(0.7),
                          StateDescriptor::superposition({1.0, 0.5, complex(0.0, 0.2)})}) {
        const auto m = moments_from_state(make_state(d), table);
        CHECK(m.m_ll == doctest::Approx(m.m_rr).epsilon(1e-13));
    }
}

TEST_CASE("moments path agrees with the explicit Fock oracle") {
    for (int k : {1, 3, 5}) {
        const auto table = build_overlap_table(k);
        for (const auto& d : {StateDescriptor::fock(2), StateDescriptor::superposition({0.4, complex(0.1, 0.7), 0.2, -0.5})}) {
            const auto s = make_state(d, 4);
            const auto a = moments_from_state(s, table);
            const auto b = moments_from_fock(s, table);
            CHECK(std::abs(a.m_ll - b.m_ll) < 1e-12);
            CHECK(std::abs(a.m_rr - b.m_rr) < 1e-12);
            CHECK(std::abs(a.m_lr - b.m_lr) < 1e-12);
        }
    }
}

TEST_CASE("vacuum has no block") {
    const auto m = analytic_limit_moments(make_state(StateDescriptor::fock(0)));
    CHECK(m.s == 0.0);
    CHECK(m.structural_negativity() == 0.0);
}

TEST_CASE("structural negativity in the limit matches the closed forms") {
    for (int n = 1; n <= 10; ++n) {
        const auto m = analytic_limit_moments(make_state(StateDescriptor::fock(n)));
        CHECK(m.structural_negativity() == doctest::Approx(0.5 * (n - 1.0) / (n + 1.0)).epsilon(1e-14));
    }
}
