#include "eprx/entanglement.hpp"

#include "eprx/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace eprx {

BipartiteDensity::BipartiteDensity(int dim_a, int dim_b, Eigen::MatrixXcd rho, double tolerance)
    : dim_a_(dim_a), dim_b_(dim_b), rho_(std::move(rho)) {
    if (dim_a < 1 || dim_b < 1 || rho_.rows() != dim_a * dim_b || rho_.cols() != dim_a * dim_b) {
        throw ConfigError("density matrix dimension does not match d_A * d_B");
    }
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > tolerance) {
        throw NumericalError("density matrix is not hermitian");
    }
    if (std::abs(rho_.trace() - complex{1.0, 0.0}) > tolerance) {
        throw NumericalError("density matrix trace is not 1");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho_, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -tolerance) {
        throw NumericalError("density matrix is not positive semidefinite (min eigenvalue " +
                             short_double(eig.eigenvalues().minCoeff()) + ")");
    }
}

Eigen::MatrixXcd BipartiteDensity::partial_transpose() const {
    Eigen::MatrixXcd out(rho_.rows(), rho_.cols());
    for (int a = 0; a < dim_a_; ++a) {
        for (int b = 0; b < dim_b_; ++b) {
            for (int a2 = 0; a2 < dim_a_; ++a2) {
                for (int b2 = 0; b2 < dim_b_; ++b2) {
                    out(a * dim_b_ + b, a2 * dim_b_ + b2) = rho_(a * dim_b_ + b2, a2 * dim_b_ + b);
                }
            }
        }
    }
    return out;
}

BipartiteDensity to_bipartite(const ProbeBlock& block) {
    // |0_L 1_R> -> index 1, |1_L 0_R> -> index 2.
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(4, 4);
    rho(2, 2) = block.rho(0, 0);
    rho(1, 1) = block.rho(1, 1);
    rho(2, 1) = block.rho(0, 1);
    rho(1, 2) = block.rho(1, 0);
    return {2, 2, std::move(rho), 1e-10};
}

double negativity(const BipartiteDensity& rho) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho.partial_transpose(), Eigen::EigenvaluesOnly);
    double sum = 0.0;
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
        const double v = eig.eigenvalues()(i);
        if (v < 0.0) {
            sum -= v;
        }
    }
    return sum;
}

double negativity_closed_form(StateKind kind, double parameter) {
    switch (kind) {
        case StateKind::Coherent:
        case StateKind::PhaseAveraged:
            if (parameter < 0.0) {
                throw ConfigError("mean particle number must be non-negative");
            }
            return 0.5 * parameter / (2.0 + parameter);
        case StateKind::Number:
            if (parameter <= 1.0) {
                return 0.0;
            }
            return 0.5 * (parameter - 1.0) / (parameter + 1.0);
        default: break;
    }
    throw ConfigError("no closed-form negativity for state kind " + to_string(kind));
}

double thermal_negativity_closed_form(double mean_occupation) {
    if (mean_occupation < 0.0) {
        throw ConfigError("mean occupation must be non-negative");
    }
    return mean_occupation / (2.0 * (mean_occupation + 1.0));
}

double disturbance_fidelity(const TrapState& state, const OverlapSums& sums) {
    if (!state.is_pure()) {
        throw ConfigError("disturbance fidelity is defined for pure trap states");
    }
    const auto moments = moments_from_sums(state, sums);
    if (!(moments.m_ll > 0.0)) {
        throw NumericalError("Lambda_L |phi> has zero norm; fidelity undefined");
    }
    const double expectation = sums.lambda00_left * number_moments(state).mean;
    return std::abs(expectation) / std::sqrt(moments.m_ll);
}

double disturbance_fidelity(const TrapState& state, const OverlapTable& table) {
    return disturbance_fidelity(state, overlap_sums(table));
}

double disturbance_fidelity_limit(const TrapState& state) {
    return disturbance_fidelity(state, limit_overlap_sums());
}

double fidelity_closed_form(double alpha_sq) {
    if (!(alpha_sq > 0.0)) {
        throw ConfigError("fidelity closed form needs |alpha|^2 > 0");
    }
    return 1.0 / std::sqrt(1.0 + 2.0 / alpha_sq);
}

}  // namespace eprx
