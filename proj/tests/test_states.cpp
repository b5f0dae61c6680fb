#include "eprx/errors.hpp"
#include "eprx/states.hpp"

#include <doctest.h>

#include <cmath>

using namespace eprx;

TEST_CASE("coherent number distribution") {
    const auto s = make_state(StateDescriptor::coherent(std::sqrt(2.0)));
    const auto& c = s.components().front().coefficients;
    CHECK(std::norm(c[2]) == doctest::Approx(2.0 * std::exp(-2.0)).epsilon(1e-14));
    CHECK(std::norm(c[2]) == doctest::Approx(0.2706705664732254).epsilon(1e-14));
    CHECK(s.tail_mass() < 1e-12);
    const auto m = number_moments(s);
    CHECK(m.mean == doctest::Approx(2.0).epsilon(1e-11));
    CHECK(m.factorial2 == doctest::Approx(4.0).epsilon(1e-10));
}

TEST_CASE("coherent truncation keeps the norm deficit equal to the tail") {
    const auto c = coherent_coefficients(1.0, 8);
    double norm2 = 0.0;
    for (auto x : c) {
        norm2 += std::norm(x);
    }
    CHECK(norm2 == doctest::Approx(0.99999887479740203).epsilon(1e-14));
}

TEST_CASE("coherent phase enters as e^{i n theta}") {
    const auto c = coherent_coefficients(std::polar(1.2, 0.3), 5);
    CHECK(std::arg(c[3]) == doctest::Approx(0.9).epsilon(1e-13));
}

TEST_CASE("thermal state is geometric") {
    const auto s = make_state(StateDescriptor::thermal(1.0));
    REQUIRE(!s.is_pure());
    CHECK(s.components()[0].weight == doctest::Approx(0.5));
    CHECK(s.components()[1].weight == doctest::Approx(0.25));
    CHECK(mean_particle_number(s) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(number_moments(s).factorial2 == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("phase-averaged state keeps the Poisson weights") {
    const auto s = make_state(StateDescriptor::phase_averaged(3.0));
    const auto m = number_moments(s);
    CHECK(m.mean == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(m.factorial2 == doctest::Approx(9.0).epsilon(1e-10));
}

TEST_CASE("number states and superpositions") {
    const auto n = make_state(StateDescriptor::fock(3));
    CHECK(n.cutoff() == 3);
    CHECK(number_moments(n).factorial2 == 6.0);
    const auto s = make_state(StateDescriptor::superposition({3.0, complex(0.0, 4.0)}));
    CHECK(number_moments(s).total == doctest::Approx(1.0));
    CHECK(s.components().front().coefficients[1].imag() == doctest::Approx(0.8));
}

TEST_CASE("tail tolerance that cannot be met raises a numerical error") {
    CHECK_THROWS_AS((void)make_state(StateDescriptor::coherent(3.0), 10), NumericalError);
    CHECK_THROWS_AS((void)make_state(StateDescriptor::fock(5), 4), NumericalError);
    CHECK_THROWS_AS((void)make_state(StateDescriptor::thermal(-1.0)), ConfigError);
    CHECK_THROWS_AS((void)make_state(StateDescriptor::superposition({0.0, 0.0})), ConfigError);
}

TEST_CASE("state kind names round trip") {
    for (auto k : {StateKind::Coherent, StateKind::Number, StateKind::Superposition, StateKind::Thermal,
                   StateKind::PhaseAveraged}) {
        CHECK(parse_state_kind(to_string(k)) == k);
    }
    CHECK_THROWS_AS((void)parse_state_kind("squeezed"), ConfigError);
}
