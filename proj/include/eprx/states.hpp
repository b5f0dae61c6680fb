#pragma once

#include "eprx/fock.hpp"

#include <complex>
#include <string>
#include <vector>

namespace eprx {

enum class StateKind { Coherent, Number, Superposition, Thermal, PhaseAveraged, Mixture };

[[nodiscard]] std::string to_string(StateKind kind);
[[nodiscard]] StateKind parse_state_kind(const std::string& name);

/// What the user asked for, before truncation.
struct StateDescriptor {
    StateKind kind = StateKind::Number;
    complex alpha{0.0, 0.0};           // coherent
    int number = 0;                    // number
    std::vector<complex> coefficients; // superposition, over mode-0 number states
    double mean_occupation = 0.0;      // thermal
    double alpha_sq = 0.0;             // phase-averaged

    static StateDescriptor coherent(complex alpha);
    static StateDescriptor fock(int n);
    static StateDescriptor superposition(std::vector<complex> coefficients);
    static StateDescriptor thermal(double mean_occupation);
    static StateDescriptor phase_averaged(double alpha_sq);

    /// The scalar the negativity curves are plotted against: |alpha|^2, N or nbar.
    [[nodiscard]] double parameter() const;
};

/// One pure component of the trap state: sum_n coefficients[n] |n, 0, ..., 0>.
struct PureComponent {
    double weight = 1.0;
    std::vector<complex> coefficients;

    [[nodiscard]] int cutoff() const noexcept { return static_cast<int>(coefficients.size()) - 1; }
    [[nodiscard]] double norm_squared() const;
};

/// Canonical form shared by every kind: weighted pure components over mode-0
/// number states. Truncated states are not renormalized; the neglected
/// probability mass is kept in tail_mass.
class TrapState {
public:
    TrapState(StateDescriptor descriptor, std::vector<PureComponent> components, double tail_mass);

    /// Weighted mixture of number states |n><n| with the given weights.
    static TrapState number_mixture(StateDescriptor descriptor, const std::vector<double>& weights, double tail_mass);

    [[nodiscard]] const StateDescriptor& descriptor() const noexcept { return descriptor_; }
    [[nodiscard]] StateKind kind() const noexcept { return descriptor_.kind; }
    [[nodiscard]] const std::vector<PureComponent>& components() const noexcept { return components_; }
    [[nodiscard]] double tail_mass() const noexcept { return tail_mass_; }
    [[nodiscard]] bool is_pure() const noexcept { return components_.size() == 1; }
    /// Largest occupied mode-0 number.
    [[nodiscard]] int cutoff() const;

private:
    StateDescriptor descriptor_;
    std::vector<PureComponent> components_;
    double tail_mass_;
};

/// Truncated counting statistics of a trap state: sum_j p_j sum_n |c_n|^2 f(n).
struct NumberMoments {
    double total = 0.0;     // f = 1
    double mean = 0.0;      // f = n
    double factorial2 = 0.0; // f = n(n-1)
};

[[nodiscard]] NumberMoments number_moments(const TrapState& state);
[[nodiscard]] NumberMoments number_moments(const PureComponent& component);
[[nodiscard]] double mean_particle_number(const TrapState& state);

/// Builds the canonical form. For coherent, thermal and phase-averaged
/// states the cutoff is the smallest value <= max_cutoff whose neglected
/// mass is below tail_tol; NumericalError names the cutoff that would be
/// needed otherwise. Number and superposition states must fit in max_cutoff.
[[nodiscard]] TrapState make_state(const StateDescriptor& descriptor, int max_cutoff = 4096,
                                   double tail_tol = 1e-12);

/// Coherent-state coefficients e^{-|a|^2/2} a^n / sqrt(n!) for n = 0..cutoff.
[[nodiscard]] std::vector<complex> coherent_coefficients(complex alpha, int cutoff);

/// Places the component on occupations (n, 0, ..., 0).
[[nodiscard]] FockVector to_fock_vector(const PureComponent& component, const BasisPtr& basis);

}  // namespace eprx
