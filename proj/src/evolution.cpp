#include "eprx/evolution.hpp"

#include "eprx/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace eprx {

void ProbeParams::validate() const {
    if (!(mass > 0.0) || !(omega > 0.0)) {
        throw ConfigError("probe mass and frequency must be positive");
    }
    if (levels < 2) {
        throw ConfigError("probe needs at least 2 levels, got " + std::to_string(levels));
    }
}

double ProbeParams::momentum_scale() const {
    return std::sqrt(0.5 * mass * omega);
}

Pulse::Pulse(Shape shape, double duration, double amplitude, std::vector<double> samples)
    : shape_(shape), duration_(duration), amplitude_(amplitude), samples_(std::move(samples)), area_(0.0) {
    if (!(duration_ > 0.0) || !std::isfinite(duration_)) {
        throw ConfigError("pulse duration T must be positive");
    }
    if (shape_ == Shape::Square) {
        area_ = amplitude_ * duration_;
    } else {
        if (samples_.size() < 2) {
            throw ConfigError("sampled pulse needs at least two samples");
        }
        const double h = duration_ / static_cast<double>(samples_.size() - 1);
        double a = 0.0;
        for (std::size_t i = 0; i + 1 < samples_.size(); ++i) {
            a += 0.5 * h * (samples_[i] + samples_[i + 1]);
        }
        area_ = a;
    }
    if (!std::isfinite(area_)) {
        throw ConfigError("pulse area must be finite");
    }
}

Pulse Pulse::square(double duration, double amplitude) {
    return {Shape::Square, duration, amplitude, {}};
}

Pulse Pulse::square_with_area(double area, double duration) {
    return {Shape::Square, duration, area / duration, {}};
}

Pulse Pulse::sampled(double duration, std::vector<double> samples) {
    return {Shape::Sampled, duration, 0.0, std::move(samples)};
}

double Pulse::at(double t) const {
    if (t < 0.0 || t > duration_) {
        return 0.0;
    }
    if (shape_ == Shape::Square) {
        return amplitude_;
    }
    const double pos = t / duration_ * static_cast<double>(samples_.size() - 1);
    const auto i = std::min(static_cast<std::size_t>(pos), samples_.size() - 2);
    const double frac = pos - static_cast<double>(i);
    return (1.0 - frac) * samples_[i] + frac * samples_[i + 1];
}

double Pulse::max_abs() const {
    if (shape_ == Shape::Square) {
        return std::abs(amplitude_);
    }
    double m = 0.0;
    for (double s : samples_) {
        m = std::max(m, std::abs(s));
    }
    return m;
}

JointState::JointState(BasisPtr basis, int probe_levels)
    : basis_(std::move(basis)),
      levels_(probe_levels),
      amplitudes_(Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis_->dimension()) * probe_levels * probe_levels)) {
    if (probe_levels < 2) {
        throw ConfigError("probe needs at least 2 levels");
    }
}

JointState::JointState(BasisPtr basis, int probe_levels, Eigen::VectorXcd amplitudes)
    : basis_(std::move(basis)), levels_(probe_levels), amplitudes_(std::move(amplitudes)) {
    if (probe_levels < 2) {
        throw ConfigError("probe needs at least 2 levels");
    }
    if (static_cast<std::size_t>(amplitudes_.size()) !=
        basis_->dimension() * static_cast<std::size_t>(probe_levels * probe_levels)) {
        throw ConfigError("joint amplitude vector has the wrong dimension");
    }
}

JointState JointState::product(const FockVector& trap, int probe_levels) {
    JointState joint(trap.basis(), probe_levels);
    joint.set_branch(0, 0, trap);
    return joint;
}

Eigen::Index JointState::index(std::size_t fock, int left, int right) const {
    return (static_cast<Eigen::Index>(fock) * levels_ + left) * levels_ + right;
}

FockVector JointState::branch(int left, int right) const {
    FockVector v(basis_);
    for (std::size_t f = 0; f < basis_->dimension(); ++f) {
        v.amplitudes()(static_cast<Eigen::Index>(f)) = amplitudes_(index(f, left, right));
    }
    return v;
}

void JointState::set_branch(int left, int right, const FockVector& v) {
    if (v.basis()->dimension() != basis_->dimension()) {
        throw ConfigError("branch vector does not match the joint trap basis");
    }
    for (std::size_t f = 0; f < basis_->dimension(); ++f) {
        amplitudes_(index(f, left, right)) = v.amplitudes()(static_cast<Eigen::Index>(f));
    }
}

JointState perturbative_state(const FockVector& phi, const FockOperator& lambda_left,
                              const FockOperator& lambda_right, const Pulse& pulse, const ProbeParams& probes,
                              bool include_h0, const OscillatorParams& trap) {
    probes.validate();
    JointState joint(phi.basis(), probes.levels);
    FockVector ground = phi;
    if (include_h0) {
        const auto h_trap = trap_hamiltonian(phi.basis(), trap);
        // Both probes sit in |0>, energy Omega/2 each.
        Eigen::VectorXcd h_phi = h_trap.matrix() * phi.amplitudes() + probes.omega * phi.amplitudes();
        ground.amplitudes() -= complex{0.0, pulse.duration()} * h_phi;
    }
    joint.set_branch(0, 0, ground);
    const double c = pulse.area() * probes.momentum_scale();
    FockVector left = apply(lambda_left, phi);
    FockVector right = apply(lambda_right, phi);
    left.amplitudes() *= c;
    right.amplitudes() *= c;
    joint.set_branch(1, 0, left);
    joint.set_branch(0, 1, right);
    return joint;
}

JointHamiltonian joint_hamiltonian(const FockOperator& lambda_left, const FockOperator& lambda_right,
                                   const ProbeParams& probes, bool include_h0, const OscillatorParams& trap) {
    probes.validate();
    const auto& basis = lambda_left.basis();
    const int d = probes.levels;
    const auto fock_dim = static_cast<Eigen::Index>(basis->dimension());
    const Eigen::Index dim = fock_dim * d * d;
    auto idx = [d](Eigen::Index f, int l, int r) { return (f * d + l) * d + r; };

    JointHamiltonian h;
    {
        std::vector<Eigen::Triplet<complex>> diag;
        if (include_h0) {
            const auto h_trap = trap_hamiltonian(basis, trap);
            for (Eigen::Index f = 0; f < fock_dim; ++f) {
                const double e = h_trap.matrix().coeff(f, f).real();
                for (int l = 0; l < d; ++l) {
                    for (int r = 0; r < d; ++r) {
                        const double probe_e = probes.omega * (l + 0.5) + probes.omega * (r + 0.5);
                        diag.emplace_back(idx(f, l, r), idx(f, l, r), e + probe_e);
                    }
                }
            }
        }
        h.h0.resize(dim, dim);
        h.h0.setFromTriplets(diag.begin(), diag.end());
        h.h0.makeCompressed();
    }

    // P = i sqrt(M Omega / 2) (a^dagger - a) on d levels.
    const double scale = probes.momentum_scale();
    std::vector<std::tuple<int, int, complex>> p_entries;
    for (int n = 0; n + 1 < d; ++n) {
        const double s = scale * std::sqrt(n + 1.0);
        p_entries.emplace_back(n + 1, n, complex{0.0, s});
        p_entries.emplace_back(n, n + 1, complex{0.0, -s});
    }

    std::vector<Eigen::Triplet<complex>> coupling;
    const auto add_side = [&](const SparseMatrix& lambda, bool left_probe) {
        for (Eigen::Index row = 0; row < lambda.outerSize(); ++row) {
            for (SparseMatrix::InnerIterator it(lambda, row); it; ++it) {
                for (const auto& [pr, pc, pv] : p_entries) {
                    for (int spectator = 0; spectator < d; ++spectator) {
                        const Eigen::Index i = left_probe ? idx(it.row(), pr, spectator) : idx(it.row(), spectator, pr);
                        const Eigen::Index j = left_probe ? idx(it.col(), pc, spectator) : idx(it.col(), spectator, pc);
                        coupling.emplace_back(i, j, it.value() * pv);
                    }
                }
            }
        }
    };
    add_side(lambda_left.matrix(), true);
    add_side(lambda_right.matrix(), false);
    h.coupling.resize(dim, dim);
    h.coupling.setFromTriplets(coupling.begin(), coupling.end());
    h.coupling.makeCompressed();
    return h;
}

Eigen::VectorXcd krylov_expmv(const SparseMatrix& h, const Eigen::VectorXcd& v, double t, int krylov_dim,
                              double tolerance, int* steps) {
    const Eigen::Index n = v.size();
    const int m_max = static_cast<int>(std::min<Eigen::Index>(krylov_dim, n));
    Eigen::VectorXcd w = v;
    double remaining = t;
    double tau = t;
    int taken = 0;
    while (remaining > 0.0) {
        const double beta0 = w.norm();
        if (beta0 == 0.0) {
            break;
        }
        Eigen::MatrixXcd basis(n, m_max + 1);
        std::vector<double> alpha;
        std::vector<double> beta;
        basis.col(0) = w / beta0;
        bool invariant = false;
        int m = 0;
        for (int j = 0; j < m_max; ++j) {
            Eigen::VectorXcd u = h * basis.col(j);
            alpha.push_back(basis.col(j).dot(u).real());
            for (int pass = 0; pass < 2; ++pass) {
                for (int i = 0; i <= j; ++i) {
                    u -= basis.col(i).dot(u) * basis.col(i);
                }
            }
            const double b = u.norm();
            m = j + 1;
            beta.push_back(b);
            if (b < 1e-13 * (std::abs(alpha.back()) + 1.0) || m == n) {
                invariant = true;
                break;
            }
            basis.col(j + 1) = u / b;
        }
        Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
        for (int j = 0; j < m; ++j) {
            tri(j, j) = alpha[static_cast<std::size_t>(j)];
            if (j + 1 < m) {
                tri(j, j + 1) = tri(j + 1, j) = beta[static_cast<std::size_t>(j)];
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(tri);
        const Eigen::MatrixXd& q = eig.eigenvectors();
        Eigen::VectorXcd y;
        for (;;) {
            tau = std::min(tau, remaining);
            Eigen::VectorXcd phase(m);
            for (int j = 0; j < m; ++j) {
                phase(j) = std::polar(1.0, -tau * eig.eigenvalues()(j)) * q(0, j);
            }
            y = q.cast<complex>() * phase;
            const double err = invariant ? 0.0 : beta0 * beta.back() * std::abs(y(m - 1));
            if (err <= tolerance * std::max(tau / t, 1e-3) || tau < 1e-12 * t) {
                break;
            }
            tau *= 0.5;
        }
        w = beta0 * (basis.leftCols(m) * y);
        remaining -= tau;
        if (remaining < 1e-15 * t) {
            remaining = 0.0;
        }
        tau *= 1.5;
        ++taken;
    }
    if (steps != nullptr) {
        *steps = taken;
    }
    return w;
}

namespace {

double max_row_sum(const SparseMatrix& m) {
    double best = 0.0;
    for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
        double s = 0.0;
        for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
            s += std::abs(it.value());
        }
        best = std::max(best, s);
    }
    return best;
}

}  // namespace

ExactResult exact_state(const JointState& initial, const FockOperator& lambda_left, const FockOperator& lambda_right,
                        const Pulse& pulse, const ProbeParams& probes, bool include_h0, const ExactOptions& options,
                        const OscillatorParams& trap) {
    if (initial.probe_levels() != probes.levels) {
        throw ConfigError("initial joint state and probe parameters disagree on the probe cutoff");
    }
    if (initial.dimension() > options.dim_cap) {
        throw ConfigError("joint dimension " + std::to_string(initial.dimension()) + " exceeds exact.dim_cap=" +
                          std::to_string(options.dim_cap));
    }
    const auto h = joint_hamiltonian(lambda_left, lambda_right, probes, include_h0, trap);
    const double norm0 = initial.norm();
    Eigen::VectorXcd psi = initial.amplitudes();
    int steps = 0;
    if (pulse.shape() == Pulse::Shape::Square) {
        SparseMatrix full = h.h0 + pulse.at(0.0) * h.coupling;
        psi = krylov_expmv(full, psi, pulse.duration(), options.krylov_dim, options.tolerance, &steps);
    } else {
        const double bound = max_row_sum(h.h0) + pulse.max_abs() * max_row_sum(h.coupling);
        // |R(ix)|^2 = 1 - x^6/72 + ... for RK4; x = 0.02 keeps each step below 1e-12.
        const int n = std::max(1, static_cast<int>(std::ceil(pulse.duration() * bound / 0.02)));
        const double dt = pulse.duration() / n;
        const complex minus_i{0.0, -1.0};
        auto rhs = [&](double t, const Eigen::VectorXcd& x) -> Eigen::VectorXcd {
            Eigen::VectorXcd hx = h.h0 * x;
            hx += pulse.at(t) * (h.coupling * x);
            return minus_i * hx;
        };
        for (int i = 0; i < n; ++i) {
            const double t = i * dt;
            const Eigen::VectorXcd k1 = rhs(t, psi);
            const Eigen::VectorXcd k2 = rhs(t + 0.5 * dt, psi + 0.5 * dt * k1);
            const Eigen::VectorXcd k3 = rhs(t + 0.5 * dt, psi + 0.5 * dt * k2);
            const Eigen::VectorXcd k4 = rhs(t + dt, psi + dt * k3);
            psi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        steps = n;
    }
    const double drift = norm0 > 0.0 ? std::abs(psi.norm() - norm0) / norm0 : 0.0;
    if (drift > options.norm_drift_bound) {
        throw NumericalError("exact propagation norm drift " + short_double(drift) + " exceeds bound " +
                             short_double(options.norm_drift_bound));
    }
    return {JointState(initial.basis(), initial.probe_levels(), std::move(psi)), drift, steps};
}

double default_regime_area(double s, const ProbeParams& probes, double amplitude) {
    if (!(s > 0.0)) {
        throw ConfigError("default pulse regime needs S > 0 (no extraction possible from this state)");
    }
    return amplitude / (probes.momentum_scale() * std::sqrt(s));
}

double quartic_scaling_area(double alpha_sq, double reference) {
    if (!(alpha_sq > 0.0)) {
        throw ConfigError("quartic pulse needs |alpha|^2 > 0");
    }
    return reference / (alpha_sq * alpha_sq);
}

}  // namespace eprx
