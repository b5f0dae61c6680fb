#include "eprx/entanglement.hpp"
#include "eprx/errors.hpp"
#include "eprx/evolution.hpp"
#include "eprx/measurement.hpp"

#include <doctest.h>

#include <cmath>

using namespace eprx;

namespace {

struct Setup {
    OverlapTable table = build_overlap_table(4);
    BasisPtr basis = make_basis(4, 3);
    FockOperator left = build_lambda_operator(Side::Left, table, basis);
    FockOperator right = build_lambda_operator(Side::Right, table, basis);

    FockVector number(int n) const {
        std::vector<int> occ(4, 0);
        occ[0] = n;
        return FockVector::basis_state(basis, occ);
    }
};

}  // namespace

TEST_CASE("pulse shapes and areas") {
    const auto sq = Pulse::square_with_area(0.3, 2.0);
    CHECK(sq.area() == doctest::Approx(0.3));
    CHECK(sq.at(1.0) == doctest::Approx(0.15));
    CHECK(sq.at(2.5) == 0.0);
    const auto tri = Pulse::sampled(2.0, {0.0, 1.0, 0.0});
    CHECK(tri.area() == doctest::Approx(1.0));
    CHECK(tri.at(0.5) == doctest::Approx(0.5));
    CHECK_THROWS_AS((void)Pulse::sampled(1.0, {1.0}), ConfigError);
}

TEST_CASE("Krylov propagator matches a dense exponential") {
    const Setup s;
    ProbeParams probes;
    const auto h = joint_hamiltonian(s.left, s.right, probes, true);
    const SparseMatrix total = h.h0 + 0.7 * h.coupling;
    const auto joint = JointState::product(s.number(2), probes.levels);
    const Eigen::MatrixXcd dense = Eigen::MatrixXcd(total);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(dense);
    const Eigen::VectorXcd phases = (eig.eigenvalues().cast<complex>() * complex(0.0, -0.9)).array().exp();
    const Eigen::VectorXcd expect = eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint() * joint.amplitudes();
    const auto got = krylov_expmv(total, joint.amplitudes(), 0.9);
    CHECK((got - expect).norm() < 1e-12);
}

TEST_CASE("exact evolution preserves the norm") {
    const Setup s;
    ProbeParams probes;
    probes.levels = 3;
    const auto r = exact_state(JointState::product(s.number(2), 3), s.left, s.right, Pulse::square_with_area(0.2, 1.0),
                               probes, true);
    CHECK(r.norm_drift < 1e-12);
    CHECK(r.state.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sampled pulse (RK4) agrees with the square pulse (Krylov)") {
    const Setup s;
    ProbeParams probes;
    const auto init = JointState::product(s.number(2), 2);
    const auto a = exact_state(init, s.left, s.right, Pulse::square_with_area(0.1, 1.0), probes, false);
    const auto b = exact_state(init, s.left, s.right, Pulse::sampled(1.0, {0.1, 0.1}), probes, false);
    CHECK((a.state.amplitudes() - b.state.amplitudes()).norm() < 1e-9);
}

TEST_CASE("residual against first order is quadratic in the pulse area") {
    const Setup s;
    ProbeParams probes;
    probes.levels = 4;
    double previous = 0.0;
    for (int i = 0; i < 3; ++i) {
        const double g = 0.08 / std::pow(2.0, i);
        const auto pulse = Pulse::square_with_area(g, g);
        const auto exact = exact_state(JointState::product(s.number(2), 4), s.left, s.right, pulse, probes, true);
        const auto first = perturbative_state(s.number(2), s.left, s.right, pulse, probes, true);
        const double res = (exact.state.amplitudes() - first.amplitudes()).norm();
        if (i > 0) {
            const double ratio = previous / res;
            CHECK(ratio >= 3.0);
            CHECK(ratio <= 5.0);
        }
        previous = res;
    }
}

TEST_CASE("H0 does not change the first-order block") {
    const Setup s;
    ProbeParams probes;
    const auto pulse = Pulse::square_with_area(1e-3, 1e-3);
    const auto a = postselect(perturbative_state(s.number(3), s.left, s.right, pulse, probes, false));
    const auto b = postselect(perturbative_state(s.number(3), s.left, s.right, pulse, probes, true));
    CHECK((a.rho - b.rho).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("joint dimension cap") {
    const Setup s;
    ExactOptions options;
    options.dim_cap = 10;
    CHECK_THROWS_AS((void)exact_state(JointState::product(s.number(1), 2), s.left, s.right,
                                      Pulse::square_with_area(0.1), ProbeParams{}, false, options),
                    ConfigError);
}

TEST_CASE("pulse regimes") {
    ProbeParams probes;
    const double g = default_regime_area(4.0, probes);
    CHECK(g * probes.momentum_scale() * 2.0 == doctest::Approx(0.1));
    CHECK(quartic_scaling_area(2.0) == doctest::Approx(0.025));
    CHECK_THROWS_AS((void)default_regime_area(0.0, probes), ConfigError);
}
