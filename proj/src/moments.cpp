#include "eprx/moments.hpp"

#include "eprx/compensated.hpp"
#include "eprx/errors.hpp"
#include "eprx/fock.hpp"

#include <array>
#include <cmath>

namespace eprx {

std::string to_string(MomentSource source) {
    switch (source) {
        case MomentSource::FiniteK: return "finite_k";
        case MomentSource::KExtrapolated: return "k_extrapolated";
        case MomentSource::AnalyticLimit: return "analytic_limit";
        case MomentSource::ExplicitFock: return "explicit_fock";
    }
    return "unknown";
}

double ProbeBlockMoments::structural_negativity() const {
    return s > 0.0 ? std::abs(m_lr) / s : 0.0;
}

OverlapSums overlap_sums(const OverlapTable& table, int modes) {
    if (modes < 0) {
        modes = table.modes();
    }
    if (modes < 1 || modes > table.modes()) {
        throw ConfigError("partial overlap sum over " + std::to_string(modes) + " modes is out of range");
    }
    CompensatedSum ll, rr, lr;
    for (int k = 0; k < modes; ++k) {
        const double l = table.left(k, 0);
        const double r = table.right(k, 0);
        ll += l * l;
        rr += r * r;
        lr += l * r;
    }
    OverlapSums sums;
    sums.t_ll = ll.value();
    sums.t_rr = rr.value();
    sums.t_lr = lr.value();
    sums.lambda00_left = table.left(0, 0);
    sums.lambda00_right = table.right(0, 0);
    sums.modes = modes;
    return sums;
}

OverlapSums limit_overlap_sums() {
    OverlapSums sums;
    sums.t_ll = 0.5;
    sums.t_rr = 0.5;
    sums.t_lr = 0.0;
    sums.modes = 0;
    return sums;
}

OverlapSums extrapolated_overlap_sums(const OverlapTable& table) {
    const int modes = table.modes();
    if (modes < 128 || modes % 16 != 0) {
        throw ConfigError("K extrapolation needs K >= 128 and divisible by 16, got K=" + std::to_string(modes));
    }
    constexpr std::array<double, 3> kPowers{0.5, 1.5, 2.5};
    std::array<OverlapSums, 4> levels;
    for (int i = 0; i < 4; ++i) {
        levels[static_cast<std::size_t>(i)] = overlap_sums(table, modes >> (3 - i));
    }

    auto richardson = [&](auto field, double& spread) {
        std::array<double, 4> v{};
        for (std::size_t i = 0; i < 4; ++i) {
            v[i] = levels[i].*field;
        }
        double previous = v[3];
        std::size_t n = 4;
        for (double p : kPowers) {
            const double r = std::pow(2.0, p);
            for (std::size_t i = 0; i + 1 < n; ++i) {
                v[i] = (r * v[i + 1] - v[i]) / (r - 1.0);
            }
            --n;
            if (n > 1) {
                previous = v[n - 1];
            }
        }
        spread = std::max(spread, std::abs(v[0] - previous));
        return v[0];
    };

    OverlapSums out;
    double spread = 0.0;
    out.t_ll = richardson(&OverlapSums::t_ll, spread);
    out.t_rr = richardson(&OverlapSums::t_rr, spread);
    out.t_lr = richardson(&OverlapSums::t_lr, spread);
    out.lambda00_left = table.left(0, 0);
    out.lambda00_right = table.right(0, 0);
    out.modes = modes;
    out.error_estimate = spread;
    return out;
}

ProbeBlockMoments moments_from_sums(const TrapState& state, const OverlapSums& sums) {
    CompensatedSum ll, rr, lr;
    for (const auto& component : state.components()) {
        const auto m = number_moments(component);
        ll += component.weight * (m.mean * sums.t_ll + m.factorial2 * sums.lambda00_left * sums.lambda00_left);
        rr += component.weight * (m.mean * sums.t_rr + m.factorial2 * sums.lambda00_right * sums.lambda00_right);
        lr += component.weight * (m.mean * sums.t_lr + m.factorial2 * sums.lambda00_left * sums.lambda00_right);
    }
    ProbeBlockMoments out;
    out.m_ll = ll.value();
    out.m_rr = rr.value();
    out.m_lr = lr.value();
    out.s = out.m_ll + out.m_rr;
    out.modes = sums.modes;
    out.tail_mass = state.tail_mass();
    return out;
}

ProbeBlockMoments moments_from_state(const TrapState& state, const OverlapTable& table) {
    auto out = moments_from_sums(state, overlap_sums(table));
    out.source = MomentSource::FiniteK;
    return out;
}

ProbeBlockMoments extrapolated_moments(const TrapState& state, const OverlapTable& table) {
    const auto sums = extrapolated_overlap_sums(table);
    auto out = moments_from_sums(state, sums);
    out.source = MomentSource::KExtrapolated;
    out.extrapolation_error = sums.error_estimate;
    return out;
}

ProbeBlockMoments analytic_limit_moments(const TrapState& state) {
    auto out = moments_from_sums(state, limit_overlap_sums());
    out.source = MomentSource::AnalyticLimit;
    return out;
}

ProbeBlockMoments moments_from_fock(const TrapState& state, const OverlapTable& table) {
    const auto basis = make_basis(table.modes(), state.cutoff());
    const auto lambda_l = build_lambda_operator(Side::Left, table, basis);
    const auto lambda_r = build_lambda_operator(Side::Right, table, basis);
    CompensatedComplexSum ll, rr, lr;
    for (const auto& component : state.components()) {
        const auto phi = to_fock_vector(component, basis);
        const auto left = apply(lambda_l, phi);
        const auto right = apply(lambda_r, phi);
        ll += component.weight * inner(left, left);
        rr += component.weight * inner(right, right);
        lr += component.weight * inner(left, right);
    }
    ProbeBlockMoments out;
    out.m_ll = ll.value().real();
    out.m_rr = rr.value().real();
    out.m_lr = lr.value();
    out.s = out.m_ll + out.m_rr;
    out.source = MomentSource::ExplicitFock;
    out.modes = table.modes();
    out.tail_mass = state.tail_mass();
    return out;
}

}  // namespace eprx
