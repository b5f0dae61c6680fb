#pragma once

#include "eprx/fock.hpp"
#include "eprx/orbitals.hpp"

#include <Eigen/Dense>

#include <vector>

namespace eprx {

/// Probe oscillators L and R (identical), hbar = 1.
struct ProbeParams {
    double mass = 1.0;
    double omega = 1.0;
    int levels = 2;

    void validate() const;
    /// sqrt(M Omega / 2), the weight of P|0> = i sqrt(M Omega / 2) |1>.
    [[nodiscard]] double momentum_scale() const;
};

/// Coupling g(t) on [0, T]. Square pulses have constant amplitude; sampled
/// pulses are piecewise linear through equally spaced samples on [0, T].
class Pulse {
public:
    enum class Shape { Square, Sampled };

    static Pulse square(double duration, double amplitude);
    /// Square pulse with the given area g = int g(t) dt.
    static Pulse square_with_area(double area, double duration = 1.0);
    static Pulse sampled(double duration, std::vector<double> samples);

    [[nodiscard]] Shape shape() const noexcept { return shape_; }
    [[nodiscard]] double duration() const noexcept { return duration_; }
    [[nodiscard]] double area() const noexcept { return area_; }
    [[nodiscard]] double at(double t) const;
    [[nodiscard]] double max_abs() const;

private:
    Pulse(Shape shape, double duration, double amplitude, std::vector<double> samples);

    Shape shape_;
    double duration_;
    double amplitude_;
    std::vector<double> samples_;
    double area_;
};

/// Amplitudes over (trap Fock basis) x (probe L levels) x (probe R levels),
/// flattened as (f * d + l) * d + r.
class JointState {
public:
    JointState(BasisPtr basis, int probe_levels);
    JointState(BasisPtr basis, int probe_levels, Eigen::VectorXcd amplitudes);

    /// |phi> |0>_L |0>_R.
    static JointState product(const FockVector& trap, int probe_levels);

    [[nodiscard]] const BasisPtr& basis() const noexcept { return basis_; }
    [[nodiscard]] int probe_levels() const noexcept { return levels_; }
    [[nodiscard]] std::size_t dimension() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
    [[nodiscard]] const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }
    [[nodiscard]] Eigen::VectorXcd& amplitudes() noexcept { return amplitudes_; }
    [[nodiscard]] Eigen::Index index(std::size_t fock, int left, int right) const;
    /// Trap vector conditioned on probe levels (left, right).
    [[nodiscard]] FockVector branch(int left, int right) const;
    void set_branch(int left, int right, const FockVector& v);
    [[nodiscard]] double norm() const { return amplitudes_.norm(); }

private:
    BasisPtr basis_;
    int levels_;
    Eigen::VectorXcd amplitudes_;
};

/// First-order state after the pulse,
///   (|phi> - i T H0 |phi>) |00> + g sqrt(M Omega/2) (Lambda_L|phi> |10> + Lambda_R|phi> |01>).
/// Unnormalized. With include_h0 == false the H0 term is dropped; it only
/// touches the |00> branch.
[[nodiscard]] JointState perturbative_state(const FockVector& phi, const FockOperator& lambda_left,
                                            const FockOperator& lambda_right, const Pulse& pulse,
                                            const ProbeParams& probes, bool include_h0,
                                            const OscillatorParams& trap = {});

struct ExactOptions {
    std::size_t dim_cap = 20000;
    int krylov_dim = 30;
    double tolerance = 1e-13;
    double norm_drift_bound = 1e-9;
};

struct ExactResult {
    JointState state;
    double norm_drift = 0.0;
    int steps = 0;
};

/// Full joint Hamiltonian pieces: H0 (trap + both probes) and the coupling
/// V = Lambda_L (x) P_L + Lambda_R (x) P_R, so H(t) = H0 + g(t) V.
struct JointHamiltonian {
    SparseMatrix h0;
    SparseMatrix coupling;
};

[[nodiscard]] JointHamiltonian joint_hamiltonian(const FockOperator& lambda_left, const FockOperator& lambda_right,
                                                 const ProbeParams& probes, bool include_h0,
                                                 const OscillatorParams& trap = {});

/// exp(-i H t) v for hermitian sparse H by Lanczos with adaptive substeps.
[[nodiscard]] Eigen::VectorXcd krylov_expmv(const SparseMatrix& h, const Eigen::VectorXcd& v, double t,
                                            int krylov_dim = 30, double tolerance = 1e-13, int* steps = nullptr);

/// Propagates through the pulse. Square pulses use one Krylov propagation of
/// the constant Hamiltonian; sampled pulses use classical RK4 with a step
/// small enough that the norm drift stays below options.norm_drift_bound.
[[nodiscard]] ExactResult exact_state(const JointState& initial, const FockOperator& lambda_left,
                                      const FockOperator& lambda_right, const Pulse& pulse,
                                      const ProbeParams& probes, bool include_h0,
                                      const ExactOptions& options = {}, const OscillatorParams& trap = {});

/// Pulse area putting 10% (by default) amplitude in the excited probe branches:
/// g sqrt(M Omega / 2) sqrt(S) = amplitude.
[[nodiscard]] double default_regime_area(double s, const ProbeParams& probes, double amplitude = 0.1);
/// The g ~ |alpha|^{-4} prescription: reference * (alpha_sq)^{-2}.
[[nodiscard]] double quartic_scaling_area(double alpha_sq, double reference = 0.1);

}  // namespace eprx
