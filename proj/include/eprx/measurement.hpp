#pragma once

#include "eprx/errors.hpp"
#include "eprx/evolution.hpp"
#include "eprx/moments.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace eprx {

/// Raised when the post-selection outcome "some probe excited" has
/// vanishing probability.
class NoExtractionEvent : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Post-selected two-probe state on the ordered basis {|1>_L|0>_R, |0>_L|1>_R},
/// unit trace. Population of other excited probe configurations (|11>, |20>,
/// ...) counts towards success_probability but is reported in leakage
/// rather than kept in rho.
struct ProbeBlock {
    enum class Source { FromMoments, FromJointState };

    Eigen::Matrix2cd rho = Eigen::Matrix2cd::Zero();
    double success_probability = 0.0;
    /// Probability (per unit norm) of excited configurations outside the block.
    double leakage = 0.0;
    /// Probability of landing inside the {10, 01} block; weights mixtures.
    double block_probability = 0.0;
    Source source = Source::FromMoments;

    /// leakage / success_probability.
    [[nodiscard]] double leakage_fraction() const;
};

inline constexpr double kSuccessFloor = 1e-300;

/// Projects out |0>_L|0>_R, traces the trap and compresses to the {10, 01} block.
[[nodiscard]] ProbeBlock postselect(const JointState& joint, double success_floor = kSuccessFloor);

/// Block built directly from moments at first order. `ground_weight` is
/// the squared norm of the |00> branch (the state norm when H0 is dropped).
[[nodiscard]] ProbeBlock block_from_moments(const ProbeBlockMoments& moments, double pulse_area,
                                            const ProbeParams& probes, double ground_weight = 1.0,
                                            double success_floor = kSuccessFloor);

/// Convex combination of per-component blocks of a mixed trap state.
[[nodiscard]] ProbeBlock mix_blocks(const std::vector<ProbeBlock>& blocks, const std::vector<double>& weights);

/// Probability that some probe is excited, 0 for a state with no excitation.
[[nodiscard]] double excitation_probability(const JointState& joint);

struct SampleCounts {
    std::uint64_t successes = 0;
    std::uint64_t failures = 0;
};

/// Bernoulli(p) draws from a seeded 64-bit Mersenne Twister; uniforms use
/// the top 53 bits, so counts are identical across platforms.
[[nodiscard]] SampleCounts sample_outcomes(double success_probability, std::uint64_t shots, std::uint64_t seed);
[[nodiscard]] SampleCounts sample_outcomes(const ProbeBlock& block, std::uint64_t shots, std::uint64_t seed);

}  // namespace eprx
