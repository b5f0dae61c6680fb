#include "eprx/errors.hpp"
#include "eprx/fock.hpp"

#include <doctest.h>

#include <sstream>

using namespace eprx;

TEST_CASE("basis dimension is C(n_max + K, K)") {
    for (int k : {1, 2, 4, 6}) {
        for (int n : {0, 1, 3, 4}) {
            const FockBasis b(k, n);
            CHECK(b.dimension() == FockBasis::expected_dimension(k, n));
        }
    }
    CHECK(FockBasis::expected_dimension(4, 3) == 35);
}

TEST_CASE("basis lookup is the inverse of state()") {
    const auto b = make_basis(4, 3);
    for (std::size_t i = 0; i < b->dimension(); ++i) {
        CHECK(b->lookup(b->state(i)) == static_cast<std::ptrdiff_t>(i));
    }
    const std::vector<int> too_many{4, 0, 0, 0};
    CHECK(b->lookup(too_many) == -1);
    CHECK(b->sector_begin(2) == 5);
    CHECK(b->sector_end(2) == 15);
}

TEST_CASE("ladder operator matrix elements") {
    const auto b = make_basis(2, 4);
    const std::vector<int> three{3, 0}, two{2, 0};
    const auto v3 = FockVector::basis_state(b, three);
    const auto v2 = FockVector::basis_state(b, two);
    CHECK(std::abs(inner(v2, apply(annihilate(0, b), v3)) - std::sqrt(3.0)) < 1e-15);
    CHECK(std::abs(inner(v3, apply(create(0, b), v2)) - std::sqrt(3.0)) < 1e-15);
}

TEST_CASE("canonical commutator below the particle cap") {
    const auto b = make_basis(3, 3);
    const auto c = commutator(annihilate(1, b), create(1, b));
    for (std::size_t i = 0; i < b->sector_end(2); ++i) {
        CHECK(std::abs(c.matrix().coeff(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) - 1.0) < 1e-14);
    }
}

TEST_CASE("Lambda_L + Lambda_R is the number operator") {
    const auto t = build_overlap_table(5);
    const auto b = make_basis(5, 3);
    const auto l = build_lambda_operator(Side::Left, t, b);
    const auto r = build_lambda_operator(Side::Right, t, b);
    CHECK(l.hermitian());
    CHECK(r.hermitian());
    const SparseMatrix diff = l.matrix() + r.matrix() - number_operator(b).matrix();
    CHECK(max_abs(diff) < 1e-12);
    CHECK(max_abs(commutator(l, r).matrix()) < 1e-12);
}

TEST_CASE("half-space projector becomes idempotent as K grows") {
    auto defect = [](int k) {
        const auto t = build_overlap_table(k);
        const Eigen::MatrixXd r = t.right().topLeftCorner(8, 8);
        const Eigen::MatrixXd r2 = (t.right() * t.right()).topLeftCorner(8, 8);
        return (r2 - r).cwiseAbs().maxCoeff();
    };
    const double d16 = defect(16), d128 = defect(128);
    CHECK(d128 < d16);
    CHECK(d128 > 0.0);
}

TEST_CASE("trap Hamiltonian is diagonal with omega (k + 1/2) per particle") {
    const auto b = make_basis(3, 2);
    const auto h = trap_hamiltonian(b, {1.0, 2.0});
    const std::vector<int> occ{0, 1, 1};
    const auto i = static_cast<Eigen::Index>(b->lookup(occ));
    CHECK(h.matrix().coeff(i, i).real() == doctest::Approx(2.0 * (1.5 + 2.5)));
}

TEST_CASE("locality residual shrinks and the literal commutator vanishes") {
    const auto r8 = locality_residual(build_overlap_table(8));
    const auto r64 = locality_residual(build_overlap_table(64));
    CHECK(r64.product < r8.product);
    CHECK(r64.product > 0.0);
    CHECK(r8.commutator < 1e-13);
}

TEST_CASE("operator dump format") {
    const auto b = make_basis(2, 1);
    std::ostringstream out;
    write_operator_csv(number_operator(b), out);
    CHECK(out.str() == "row,col,re,im\n1,1,1,0\n2,2,1,0\n");  // explicit zeros are skipped
}

TEST_CASE("mode index out of range") {
    const auto b = make_basis(2, 1);
    CHECK_THROWS_AS((void)annihilate(2, b), ConfigError);
}
