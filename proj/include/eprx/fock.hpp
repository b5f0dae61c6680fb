#pragma once

#include "eprx/orbitals.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <complex>
#include <map>
#include <memory>
#include <ostream>
#include <span>
#include <vector>

namespace eprx {

using complex = std::complex<double>;
using SparseMatrix = Eigen::SparseMatrix<complex, Eigen::RowMajor>;

enum class Side { Left, Right };

/// Truncated multimode occupation basis: all (n_0..n_{K-1}) with sum <= n_max,
/// ordered by total particle number, then lexicographically.
class FockBasis {
public:
    FockBasis(int modes, int max_particles);

    [[nodiscard]] int modes() const noexcept { return modes_; }
    [[nodiscard]] int max_particles() const noexcept { return max_particles_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return occupations_.size() / static_cast<std::size_t>(modes_); }

    [[nodiscard]] std::span<const int> state(std::size_t index) const;
    [[nodiscard]] int total(std::size_t index) const;
    /// Position of an occupation vector; -1 if it lies outside the truncation.
    [[nodiscard]] std::ptrdiff_t lookup(std::span<const int> occupation) const;
    /// Index of the first state with the given total particle number.
    [[nodiscard]] std::size_t sector_begin(int particles) const;
    [[nodiscard]] std::size_t sector_end(int particles) const;

    /// C(n_max + K, K), computed without building the basis.
    [[nodiscard]] static std::size_t expected_dimension(int modes, int max_particles);

private:
    int modes_;
    int max_particles_;
    std::vector<int> occupations_;
    std::vector<std::size_t> sector_offsets_;
    std::map<std::vector<int>, std::size_t> index_;
};

using BasisPtr = std::shared_ptr<const FockBasis>;

[[nodiscard]] BasisPtr make_basis(int modes, int max_particles);

class FockVector {
public:
    explicit FockVector(BasisPtr basis);
    FockVector(BasisPtr basis, Eigen::VectorXcd amplitudes);

    [[nodiscard]] const BasisPtr& basis() const noexcept { return basis_; }
    [[nodiscard]] const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }
    [[nodiscard]] Eigen::VectorXcd& amplitudes() noexcept { return amplitudes_; }
    [[nodiscard]] double norm() const { return amplitudes_.norm(); }

    /// Unit amplitude on one occupation vector.
    [[nodiscard]] static FockVector basis_state(BasisPtr basis, std::span<const int> occupation);

private:
    BasisPtr basis_;
    Eigen::VectorXcd amplitudes_;
};

class FockOperator {
public:
    FockOperator(BasisPtr basis, SparseMatrix matrix, bool hermitian);

    [[nodiscard]] const BasisPtr& basis() const noexcept { return basis_; }
    [[nodiscard]] const SparseMatrix& matrix() const noexcept { return matrix_; }
    [[nodiscard]] bool hermitian() const noexcept { return hermitian_; }

    [[nodiscard]] FockOperator adjoint() const;

private:
    BasisPtr basis_;
    SparseMatrix matrix_;
    bool hermitian_;
};

[[nodiscard]] FockOperator identity(const BasisPtr& basis);
/// a_k. Never leaves the truncated space.
[[nodiscard]] FockOperator annihilate(int mode, const BasisPtr& basis);
/// a_k^dagger compressed to the truncation: states at sum n = n_max map to 0.
[[nodiscard]] FockOperator create(int mode, const BasisPtr& basis);
[[nodiscard]] FockOperator number_operator(const BasisPtr& basis);
/// sum_k (k + 1/2) omega a_k^dagger a_k.
[[nodiscard]] FockOperator trap_hamiltonian(const BasisPtr& basis, const OscillatorParams& params = {});

/// Lambda_side = sum_{k,l} lambda^{side}_{kl} a_k^dagger a_l.
[[nodiscard]] FockOperator build_lambda_operator(Side side, const OverlapTable& table, const BasisPtr& basis);

[[nodiscard]] FockVector apply(const FockOperator& op, const FockVector& v);
[[nodiscard]] complex inner(const FockVector& u, const FockVector& v);
[[nodiscard]] FockOperator product(const FockOperator& a, const FockOperator& b);
[[nodiscard]] FockOperator commutator(const FockOperator& a, const FockOperator& b);
[[nodiscard]] double max_abs(const SparseMatrix& m);

/// Finite-K locality diagnostics on the single-particle sector (n_max = 1),
/// where Lambda_side acts as the K x K matrix lambda^side.
struct LocalityResidual {
    int modes = 0;
    int block = 0;
    /// max |[Lambda_L, Lambda_R]| on the sector. Lambda_L + Lambda_R = N
    /// exactly under the truncation, so this sits at rounding level.
    double commutator = 0.0;
    /// max |(Lambda_L Lambda_R)_{kl}| over k, l < block: the truncated form of
    /// sum_m lambda^L_{km} lambda^R_{ml} = int phi_k phi_l theta_L theta_R = 0.
    double product = 0.0;
};

[[nodiscard]] LocalityResidual locality_residual(const OverlapTable& table, int block = 8);

/// Coordinate-list dump `row,col,re,im`.
void write_operator_csv(const FockOperator& op, std::ostream& out);

}  // namespace eprx
