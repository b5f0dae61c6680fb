#include "eprx/entanglement.hpp"
#include "eprx/measurement.hpp"

#include <doctest.h>

#include <cmath>

using namespace eprx;

TEST_CASE("vacuum probe state has no extraction event") {
    const auto basis = make_basis(2, 1);
    const std::vector<int> occ{1, 0};
    const auto joint = JointState::product(FockVector::basis_state(basis, occ), 2);
    CHECK_THROWS_AS((void)postselect(joint), NoExtractionEvent);
    CHECK(excitation_probability(joint) == 0.0);
}

TEST_CASE("post-selection reads the single-excitation block") {
    const auto basis = make_basis(1, 1);
    const std::vector<int> one{1};
    const auto trap = FockVector::basis_state(basis, one);
    JointState joint(basis, 2);
    FockVector a(basis), b(basis);
    a.amplitudes() = 0.6 * trap.amplitudes();
    b.amplitudes() = complex(0.0, 0.8) * trap.amplitudes();
    joint.set_branch(1, 0, a);
    joint.set_branch(0, 1, b);
    const auto block = postselect(joint);
    CHECK(block.success_probability == doctest::Approx(1.0));
    CHECK(block.rho(0, 0).real() == doctest::Approx(0.36));
    CHECK(block.rho(1, 1).real() == doctest::Approx(0.64));
    CHECK(std::abs(block.rho(0, 1)) == doctest::Approx(0.48));
    CHECK(negativity(to_bipartite(block)) == doctest::Approx(0.48));
}

TEST_CASE("block from moments") {
    ProbeBlockMoments m;
    m.m_ll = 2.0;
    m.m_rr = 2.0;
    m.m_lr = 1.0;
    m.s = 4.0;
    const auto b = block_from_moments(m, 0.1, ProbeParams{});
    CHECK(b.rho.trace().real() == doctest::Approx(1.0));
    CHECK(b.success_probability == doctest::Approx(0.02 / 1.02));
    CHECK(negativity(to_bipartite(b)) == doctest::Approx(0.25));
}

TEST_CASE("mixtures weight blocks by their block probability") {
    ProbeBlock a, b;
    a.rho << 1.0, 0.0, 0.0, 0.0;
    a.block_probability = a.success_probability = 0.3;
    b.rho << 0.0, 0.0, 0.0, 1.0;
    b.block_probability = b.success_probability = 0.1;
    const auto m = mix_blocks({a, b}, {0.5, 0.5});
    CHECK(m.rho(0, 0).real() == doctest::Approx(0.75));
    CHECK(m.success_probability == doctest::Approx(0.2));
}

TEST_CASE("sampling is seeded and binomially consistent") {
    const double p = 0.37;
    const std::uint64_t shots = 200000;
    const auto a = sample_outcomes(p, shots, 11);
    const auto b = sample_outcomes(p, shots, 11);
    CHECK(a.successes == b.successes);
    CHECK(a.successes + a.failures == shots);
    const double sigma = std::sqrt(shots * p * (1.0 - p));
    CHECK(std::abs(static_cast<double>(a.successes) - shots * p) < 5.0 * sigma);
    CHECK(sample_outcomes(p, shots, 12).successes != a.successes);
    CHECK_THROWS_AS((void)sample_outcomes(1.5, 10, 1), ConfigError);
}
