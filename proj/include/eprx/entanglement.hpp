#pragma once

#include "eprx/measurement.hpp"
#include "eprx/moments.hpp"
#include "eprx/states.hpp"

#include <Eigen/Dense>

namespace eprx {

/// Density matrix of a d_A x d_B system, index a * d_B + b.
class BipartiteDensity {
public:
    BipartiteDensity(int dim_a, int dim_b, Eigen::MatrixXcd rho, double tolerance = 1e-10);

    [[nodiscard]] int dim_a() const noexcept { return dim_a_; }
    [[nodiscard]] int dim_b() const noexcept { return dim_b_; }
    [[nodiscard]] const Eigen::MatrixXcd& matrix() const noexcept { return rho_; }

    /// Transpose on subsystem B.
    [[nodiscard]] Eigen::MatrixXcd partial_transpose() const;

private:
    int dim_a_;
    int dim_b_;
    Eigen::MatrixXcd rho_;
};

/// Two-qubit embedding of the post-selected block (A = probe L, B = probe R).
[[nodiscard]] BipartiteDensity to_bipartite(const ProbeBlock& block);

/// Sum of |negative eigenvalues| of rho^{T_B}; a Bell state gives 1/2.
[[nodiscard]] double negativity(const BipartiteDensity& rho);

/// 1/2 <N>/(2 + <N>) for coherent, 1/2 (N-1)/(N+1) for number states
/// (0 for N <= 1). Throws for kinds without a closed form.
[[nodiscard]] double negativity_closed_form(StateKind kind, double parameter);

/// Thermal counterpart derived from geometric factorial moments: nbar / (2 (nbar + 1)).
[[nodiscard]] double thermal_negativity_closed_form(double mean_occupation);

/// F = |<phi|Lambda_L|phi>| / ||Lambda_L |phi>|| for a pure mode-0 state,
/// with <phi|Lambda_L|phi> = lambda^L_00 <n> and ||Lambda_L phi||^2 = m_ll.
[[nodiscard]] double disturbance_fidelity(const TrapState& state, const OverlapSums& sums);
[[nodiscard]] double disturbance_fidelity(const TrapState& state, const OverlapTable& table);
[[nodiscard]] double disturbance_fidelity_limit(const TrapState& state);

/// 1 / sqrt(1 + 2 / |alpha|^2).
[[nodiscard]] double fidelity_closed_form(double alpha_sq);

}  // namespace eprx
