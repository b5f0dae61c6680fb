#pragma once

#include "eprx/orbitals.hpp"
#include "eprx/states.hpp"

#include <complex>
#include <string>

namespace eprx {

/// Column-0 overlap sums that fix every block moment of a mode-0 state:
///   T_IJ = sum_{k<K} lambda^I_{k0} lambda^J_{k0},  plus lambda^I_{00}.
struct OverlapSums {
    double t_ll = 0.0;
    double t_rr = 0.0;
    double t_lr = 0.0;
    double lambda00_left = 0.5;
    double lambda00_right = 0.5;
    int modes = 0;               // 0 for the K -> infinity limit
    double error_estimate = 0.0; // extrapolation only
};

/// Partial sums over the first `modes` rows of column 0 (all rows when modes < 0).
[[nodiscard]] OverlapSums overlap_sums(const OverlapTable& table, int modes = -1);

/// K -> infinity limit: T_LL = T_RR = 1/2, T_LR = 0, lambda_00 = 1/2.
[[nodiscard]] OverlapSums limit_overlap_sums();

/// Richardson extrapolation in K of the partial sums at K, K/2, K/4, K/8.
/// The neglected tail of column 0 falls off as K^{-1/2}, K^{-3/2}, K^{-5/2},
/// so each tableau column removes one of those powers. Needs K >= 128 and
/// K divisible by 16. error_estimate is the spread of the last two tableau
/// entries.
[[nodiscard]] OverlapSums extrapolated_overlap_sums(const OverlapTable& table);

enum class MomentSource { FiniteK, KExtrapolated, AnalyticLimit, ExplicitFock };

[[nodiscard]] std::string to_string(MomentSource source);

/// The three entries of the post-selected probe block, before normalization:
///   m_ll = <Lambda_L Lambda_L>,  m_rr = <Lambda_R Lambda_R>,
///   m_lr = <phi| Lambda_L^dagger Lambda_R |phi>,  s = m_ll + m_rr.
struct ProbeBlockMoments {
    double m_ll = 0.0;
    double m_rr = 0.0;
    complex m_lr{0.0, 0.0};
    double s = 0.0;
    MomentSource source = MomentSource::FiniteK;
    int modes = 0;
    double tail_mass = 0.0;
    double extrapolation_error = 0.0;

    /// |m_lr| / s, or 0 when s == 0.
    [[nodiscard]] double structural_negativity() const;
};

/// For a pure component sum_n c_n |n>:
///   m_IJ = sum_n |c_n|^2 [ n T_IJ + n(n-1) lambda^I_00 lambda^J_00 ],
/// mixtures by convex combination. Number conservation of Lambda removes the
/// n != n' cross terms, so only |c_n|^2 enters.
[[nodiscard]] ProbeBlockMoments moments_from_sums(const TrapState& state, const OverlapSums& sums);

[[nodiscard]] ProbeBlockMoments moments_from_state(const TrapState& state, const OverlapTable& table);
[[nodiscard]] ProbeBlockMoments extrapolated_moments(const TrapState& state, const OverlapTable& table);
[[nodiscard]] ProbeBlockMoments analytic_limit_moments(const TrapState& state);

/// Brute force: builds the truncated Fock space (n_max = state cutoff),
/// explicit Lambda_L/R matrices and evaluates <Lambda_I phi | Lambda_J phi>.
[[nodiscard]] ProbeBlockMoments moments_from_fock(const TrapState& state, const OverlapTable& table);

}  // namespace eprx
