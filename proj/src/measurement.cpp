#include "eprx/measurement.hpp"

#include "eprx/compensated.hpp"

#include <random>
#include <string>

namespace eprx {

double ProbeBlock::leakage_fraction() const {
    return success_probability > 0.0 ? leakage / success_probability : 0.0;
}

ProbeBlock postselect(const JointState& joint, double success_floor) {
    const int d = joint.probe_levels();
    CompensatedSum ground, block, outside;
    for (int l = 0; l < d; ++l) {
        for (int r = 0; r < d; ++r) {
            const double w = joint.branch(l, r).amplitudes().squaredNorm();
            if (l == 0 && r == 0) {
                ground += w;
            } else if (l + r == 1) {
                block += w;
            } else {
                outside += w;
            }
        }
    }
    const double total = ground.value() + block.value() + outside.value();
    if (!(total > 0.0)) {
        throw NoExtractionEvent("joint state has zero norm");
    }
    const double p_succ = (block.value() + outside.value()) / total;
    if (p_succ < success_floor || !(block.value() > 0.0)) {
        throw NoExtractionEvent("no extraction event possible: success probability " + short_double(p_succ));
    }
    const auto v10 = joint.branch(1, 0).amplitudes();
    const auto v01 = joint.branch(0, 1).amplitudes();
    ProbeBlock out;
    out.rho(0, 0) = v10.squaredNorm();
    out.rho(1, 1) = v01.squaredNorm();
    out.rho(0, 1) = v01.dot(v10);  // <10|rho|01> = sum_f v10_f conj(v01_f)
    out.rho(1, 0) = std::conj(out.rho(0, 1));
    out.rho /= block.value();
    out.success_probability = p_succ;
    out.leakage = outside.value() / total;
    out.block_probability = block.value() / total;
    out.source = ProbeBlock::Source::FromJointState;
    return out;
}

ProbeBlock block_from_moments(const ProbeBlockMoments& moments, double pulse_area, const ProbeParams& probes,
                              double ground_weight, double success_floor) {
    const double c2 = pulse_area * pulse_area * probes.momentum_scale() * probes.momentum_scale();
    const double excited = c2 * moments.s;
    const double total = ground_weight + excited;
    const double p_succ = total > 0.0 ? excited / total : 0.0;
    if (p_succ < success_floor || !(moments.s > 0.0)) {
        throw NoExtractionEvent("no extraction event possible: S = " + short_double(moments.s));
    }
    ProbeBlock out;
    out.rho(0, 0) = moments.m_ll / moments.s;
    out.rho(1, 1) = moments.m_rr / moments.s;
    // <10|rho|01> = <Lambda_R phi | Lambda_L phi> = conj(m_lr)
    out.rho(0, 1) = std::conj(moments.m_lr) / moments.s;
    out.rho(1, 0) = moments.m_lr / moments.s;
    out.success_probability = p_succ;
    out.leakage = 0.0;
    out.block_probability = p_succ;
    out.source = ProbeBlock::Source::FromMoments;
    return out;
}

ProbeBlock mix_blocks(const std::vector<ProbeBlock>& blocks, const std::vector<double>& weights) {
    if (blocks.empty() || blocks.size() != weights.size()) {
        throw ConfigError("mix_blocks needs one weight per block");
    }
    ProbeBlock out;
    out.source = blocks.front().source;
    CompensatedSum p_succ, leakage, block_weight;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const double w = weights[i];
        out.rho += (w * blocks[i].block_probability) * blocks[i].rho;
        p_succ += w * blocks[i].success_probability;
        leakage += w * blocks[i].leakage;
        block_weight += w * blocks[i].block_probability;
    }
    if (!(block_weight.value() > 0.0)) {
        throw NoExtractionEvent("no extraction event possible in any mixture component");
    }
    out.rho /= block_weight.value();
    out.success_probability = p_succ.value();
    out.leakage = leakage.value();
    out.block_probability = block_weight.value();
    return out;
}

double excitation_probability(const JointState& joint) {
    const double total = joint.amplitudes().squaredNorm();
    if (!(total > 0.0)) {
        return 0.0;
    }
    CompensatedSum excited;
    for (int l = 0; l < joint.probe_levels(); ++l) {
        for (int r = 0; r < joint.probe_levels(); ++r) {
            if (l != 0 || r != 0) {
                excited += joint.branch(l, r).amplitudes().squaredNorm();
            }
        }
    }
    return excited.value() / total;
}

SampleCounts sample_outcomes(double success_probability, std::uint64_t shots, std::uint64_t seed) {
    if (shots < 1) {
        throw ConfigError("sampling needs at least one shot");
    }
    if (!(success_probability >= 0.0 && success_probability <= 1.0)) {
        throw ConfigError("success probability must lie in [0, 1]");
    }
    std::mt19937_64 rng(seed);
    SampleCounts counts;
    for (std::uint64_t i = 0; i < shots; ++i) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (u < success_probability) {
            ++counts.successes;
        } else {
            ++counts.failures;
        }
    }
    return counts;
}

SampleCounts sample_outcomes(const ProbeBlock& block, std::uint64_t shots, std::uint64_t seed) {
    return sample_outcomes(block.success_probability, shots, seed);
}

}  // namespace eprx
