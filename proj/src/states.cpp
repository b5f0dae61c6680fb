#include "eprx/states.hpp"

#include "eprx/compensated.hpp"
#include "eprx/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace eprx {

std::string to_string(StateKind kind) {
    switch (kind) {
        case StateKind::Coherent: return "coherent";
        case StateKind::Number: return "number";
        case StateKind::Superposition: return "superposition";
        case StateKind::Thermal: return "thermal";
        case StateKind::PhaseAveraged: return "phase_averaged";
        case StateKind::Mixture: return "mixture";
    }
    return "unknown";
}

StateKind parse_state_kind(const std::string& name) {
    if (name == "coherent") return StateKind::Coherent;
    if (name == "number") return StateKind::Number;
    if (name == "superposition") return StateKind::Superposition;
    if (name == "thermal") return StateKind::Thermal;
    if (name == "phase_averaged" || name == "phase-averaged") return StateKind::PhaseAveraged;
    throw ConfigError("unknown state kind '" + name +
                      "' (expected coherent, number, superposition, thermal, phase_averaged)");
}

StateDescriptor StateDescriptor::coherent(complex alpha) {
    StateDescriptor d;
    d.kind = StateKind::Coherent;
    d.alpha = alpha;
    return d;
}

StateDescriptor StateDescriptor::fock(int n) {
    StateDescriptor d;
    d.kind = StateKind::Number;
    d.number = n;
    return d;
}

StateDescriptor StateDescriptor::superposition(std::vector<complex> coefficients) {
    StateDescriptor d;
    d.kind = StateKind::Superposition;
    d.coefficients = std::move(coefficients);
    return d;
}

StateDescriptor StateDescriptor::thermal(double mean_occupation) {
    StateDescriptor d;
    d.kind = StateKind::Thermal;
    d.mean_occupation = mean_occupation;
    return d;
}

StateDescriptor StateDescriptor::phase_averaged(double alpha_sq) {
    StateDescriptor d;
    d.kind = StateKind::PhaseAveraged;
    d.alpha_sq = alpha_sq;
    return d;
}

double StateDescriptor::parameter() const {
    switch (kind) {
        case StateKind::Coherent: return std::norm(alpha);
        case StateKind::Number: return number;
        case StateKind::Thermal: return mean_occupation;
        case StateKind::PhaseAveraged: return alpha_sq;
        case StateKind::Superposition:
        case StateKind::Mixture: break;
    }
    return 0.0;
}

double PureComponent::norm_squared() const {
    CompensatedSum s;
    for (const auto& c : coefficients) {
        s += std::norm(c);
    }
    return s.value();
}

TrapState::TrapState(StateDescriptor descriptor, std::vector<PureComponent> components, double tail_mass)
    : descriptor_(std::move(descriptor)), components_(std::move(components)), tail_mass_(tail_mass) {
    if (components_.empty()) {
        throw ConfigError("trap state needs at least one component");
    }
    for (const auto& c : components_) {
        if (c.coefficients.empty()) {
            throw ConfigError("trap state component has no coefficients");
        }
        if (!(c.weight >= 0.0)) {
            throw ConfigError("mixture weights must be non-negative");
        }
    }
}

TrapState TrapState::number_mixture(StateDescriptor descriptor, const std::vector<double>& weights,
                                    double tail_mass) {
    std::vector<PureComponent> components;
    components.reserve(weights.size());
    for (std::size_t n = 0; n < weights.size(); ++n) {
        PureComponent c;
        c.weight = weights[n];
        c.coefficients.assign(n + 1, complex{0.0, 0.0});
        c.coefficients[n] = 1.0;
        components.push_back(std::move(c));
    }
    return {std::move(descriptor), std::move(components), tail_mass};
}

int TrapState::cutoff() const {
    int cut = 0;
    for (const auto& c : components_) {
        cut = std::max(cut, c.cutoff());
    }
    return cut;
}

NumberMoments number_moments(const PureComponent& component) {
    CompensatedSum total, mean, fact2;
    for (std::size_t n = 0; n < component.coefficients.size(); ++n) {
        const double p = std::norm(component.coefficients[n]);
        const auto dn = static_cast<double>(n);
        total += p;
        mean += p * dn;
        fact2 += p * dn * (dn - 1.0);
    }
    return {total.value(), mean.value(), fact2.value()};
}

NumberMoments number_moments(const TrapState& state) {
    CompensatedSum total, mean, fact2;
    for (const auto& c : state.components()) {
        const auto m = number_moments(c);
        total += c.weight * m.total;
        mean += c.weight * m.mean;
        fact2 += c.weight * m.factorial2;
    }
    return {total.value(), mean.value(), fact2.value()};
}

double mean_particle_number(const TrapState& state) {
    return number_moments(state).mean;
}

std::vector<complex> coherent_coefficients(complex alpha, int cutoff) {
    std::vector<complex> c(static_cast<std::size_t>(cutoff) + 1, complex{0.0, 0.0});
    const double r2 = std::norm(alpha);
    if (r2 == 0.0) {
        c[0] = 1.0;
        return c;
    }
    const double log_r = 0.5 * std::log(r2);
    const double phase = std::arg(alpha);
    for (int n = 0; n <= cutoff; ++n) {
        const double log_mag = -0.5 * r2 + n * log_r - 0.5 * std::lgamma(n + 1.0);
        c[static_cast<std::size_t>(n)] = std::polar(std::exp(log_mag), n * phase);
    }
    return c;
}

namespace {

struct Cutoff {
    int cutoff;
    double tail;
};

// Smallest cutoff whose neglected mass sum_{n > cutoff} pmf(n) is below tol.
Cutoff choose_cutoff(const std::function<double(int)>& pmf, double mean, int max_cutoff, double tail_tol,
                     const std::string& what) {
    std::vector<double> p;
    for (int n = 0;; ++n) {
        const double v = pmf(n);
        p.push_back(v);
        if (n > mean && (v < 1e-40 * tail_tol || v == 0.0)) {
            break;
        }
        if (n > 1'000'000) {
            throw NumericalError(what + ": probability mass function does not decay");
        }
    }
    // suffix[n] = sum_{m >= n} p[m]
    std::vector<double> suffix(p.size() + 1, 0.0);
    CompensatedSum acc;
    for (std::size_t n = p.size(); n-- > 0;) {
        acc += p[n];
        suffix[n] = acc.value();
    }
    for (std::size_t c = 0; c + 1 < suffix.size(); ++c) {
        if (suffix[c + 1] < tail_tol) {
            if (static_cast<int>(c) > max_cutoff) {
                throw NumericalError(what + ": tail mass below " + short_double(tail_tol) + " needs n_cut >= " +
                                     std::to_string(c) + " but the cutoff bound is " + std::to_string(max_cutoff));
            }
            return {static_cast<int>(c), suffix[c + 1]};
        }
    }
    const int cut = static_cast<int>(p.size()) - 1;
    if (cut > max_cutoff) {
        throw NumericalError(what + ": needs n_cut >= " + std::to_string(cut));
    }
    return {cut, 0.0};
}

}  // namespace

TrapState make_state(const StateDescriptor& descriptor, int max_cutoff, double tail_tol) {
    if (max_cutoff < 1) {
        throw ConfigError("n_cut must be >= 1");
    }
    if (!(tail_tol > 0.0)) {
        throw ConfigError("tail tolerance must be positive");
    }
    switch (descriptor.kind) {
        case StateKind::Number: {
            if (descriptor.number < 0) {
                throw ConfigError("number state needs N >= 0");
            }
            if (descriptor.number > max_cutoff) {
                throw NumericalError("number state N=" + std::to_string(descriptor.number) + " needs n_cut >= " +
                                     std::to_string(descriptor.number));
            }
            PureComponent c;
            c.coefficients.assign(static_cast<std::size_t>(descriptor.number) + 1, complex{0.0, 0.0});
            c.coefficients.back() = 1.0;
            return {descriptor, {std::move(c)}, 0.0};
        }
        case StateKind::Superposition: {
            if (descriptor.coefficients.empty()) {
                throw ConfigError("superposition needs at least one coefficient");
            }
            if (static_cast<int>(descriptor.coefficients.size()) - 1 > max_cutoff) {
                throw NumericalError("superposition needs n_cut >= " +
                                     std::to_string(descriptor.coefficients.size() - 1));
            }
            PureComponent c;
            c.coefficients = descriptor.coefficients;
            const double norm = std::sqrt(c.norm_squared());
            if (!(norm > 0.0) || !std::isfinite(norm)) {
                throw ConfigError("superposition coefficients must have finite non-zero norm");
            }
            for (auto& x : c.coefficients) {
                x /= norm;
            }
            return {descriptor, {std::move(c)}, 0.0};
        }
        case StateKind::Coherent: {
            const double r2 = std::norm(descriptor.alpha);
            if (!std::isfinite(r2)) {
                throw ConfigError("coherent amplitude must be finite");
            }
            const auto cut = choose_cutoff(
                [r2](int n) {
                    return r2 == 0.0 ? (n == 0 ? 1.0 : 0.0)
                                     : std::exp(-r2 + n * std::log(r2) - std::lgamma(n + 1.0));
                },
                r2, max_cutoff, tail_tol, "coherent state");
            PureComponent c;
            c.coefficients = coherent_coefficients(descriptor.alpha, cut.cutoff);
            return {descriptor, {std::move(c)}, cut.tail};
        }
        case StateKind::PhaseAveraged: {
            const double r2 = descriptor.alpha_sq;
            if (!(r2 >= 0.0) || !std::isfinite(r2)) {
                throw ConfigError("phase-averaged state needs |alpha|^2 >= 0");
            }
            const auto cut = choose_cutoff(
                [r2](int n) {
                    return r2 == 0.0 ? (n == 0 ? 1.0 : 0.0)
                                     : std::exp(-r2 + n * std::log(r2) - std::lgamma(n + 1.0));
                },
                r2, max_cutoff, tail_tol, "phase-averaged state");
            // Averaging |a e^{i t}><a e^{i t}| over t keeps only the diagonal |c_n|^2.
            const auto coeffs = coherent_coefficients(complex{std::sqrt(r2), 0.0}, cut.cutoff);
            std::vector<double> weights(coeffs.size());
            std::transform(coeffs.begin(), coeffs.end(), weights.begin(), [](complex c) { return std::norm(c); });
            return TrapState::number_mixture(descriptor, weights, cut.tail);
        }
        case StateKind::Thermal: {
            const double nbar = descriptor.mean_occupation;
            if (!(nbar >= 0.0) || !std::isfinite(nbar)) {
                throw ConfigError("thermal state needs mean occupation >= 0");
            }
            const double ratio = nbar / (1.0 + nbar);
            auto pmf = [nbar, ratio](int n) {
                if (nbar == 0.0) {
                    return n == 0 ? 1.0 : 0.0;
                }
                return std::exp(n * std::log(ratio)) / (1.0 + nbar);
            };
            const auto cut = choose_cutoff(pmf, nbar, max_cutoff, tail_tol, "thermal state");
            std::vector<double> weights(static_cast<std::size_t>(cut.cutoff) + 1);
            for (int n = 0; n <= cut.cutoff; ++n) {
                weights[static_cast<std::size_t>(n)] = pmf(n);
            }
            return TrapState::number_mixture(descriptor, weights, cut.tail);
        }
        case StateKind::Mixture: break;
    }
    throw ConfigError("make_state does not build generic mixtures; use TrapState::number_mixture");
}

FockVector to_fock_vector(const PureComponent& component, const BasisPtr& basis) {
    if (component.cutoff() > basis->max_particles()) {
        throw ConfigError("state cutoff " + std::to_string(component.cutoff()) + " exceeds basis capacity n_max=" +
                          std::to_string(basis->max_particles()));
    }
    FockVector v(basis);
    std::vector<int> occ(static_cast<std::size_t>(basis->modes()), 0);
    for (std::size_t n = 0; n < component.coefficients.size(); ++n) {
        occ[0] = static_cast<int>(n);
        v.amplitudes()(basis->lookup(occ)) = component.coefficients[n];
    }
    return v;
}

}  // namespace eprx
