#include "eprx/fock.hpp"

#include "eprx/errors.hpp"

#include <cmath>
#include <iomanip>
#include <algorithm>
#include <limits>
#include <string>

namespace eprx {

namespace {

constexpr std::size_t kMaxBasisDimension = 5'000'000;

void append_compositions(int total, int modes, std::vector<int>& prefix, std::vector<int>& out) {
    if (static_cast<int>(prefix.size()) == modes - 1) {
        prefix.push_back(total);
        out.insert(out.end(), prefix.begin(), prefix.end());
        prefix.pop_back();
        return;
    }
    for (int n = 0; n <= total; ++n) {
        prefix.push_back(n);
        append_compositions(total - n, modes, prefix, out);
        prefix.pop_back();
    }
}

void require_same_basis(const BasisPtr& a, const BasisPtr& b, const char* what) {
    if (a != b && (a->modes() != b->modes() || a->max_particles() != b->max_particles())) {
        throw ConfigError(std::string(what) + ": basis mismatch");
    }
}

using Triplet = Eigen::Triplet<complex>;

SparseMatrix from_triplets(std::size_t dim, const std::vector<Triplet>& triplets) {
    const auto n = static_cast<Eigen::Index>(dim);
    SparseMatrix m(n, n);
    m.setFromTriplets(triplets.begin(), triplets.end());
    m.makeCompressed();
    return m;
}

}  // namespace

std::size_t FockBasis::expected_dimension(int modes, int max_particles) {
    // C(n_max + K, K) via the multiplicative formula on the smaller argument.
    const int r = std::min(modes, max_particles);
    const int n = modes + max_particles;
    long double value = 1.0L;
    for (int i = 1; i <= r; ++i) {
        value = value * (n - r + i) / i;
    }
    if (value > static_cast<long double>(std::numeric_limits<std::size_t>::max() / 2)) {
        return std::numeric_limits<std::size_t>::max();
    }
    return static_cast<std::size_t>(std::llround(value));
}

FockBasis::FockBasis(int modes, int max_particles) : modes_(modes), max_particles_(max_particles) {
    if (modes < 1) {
        throw ConfigError("Fock basis needs at least one mode");
    }
    if (max_particles < 0) {
        throw ConfigError("Fock basis particle cap must be non-negative");
    }
    const auto dim = expected_dimension(modes, max_particles);
    if (dim > kMaxBasisDimension) {
        throw NumericalError("Fock basis dimension " + std::to_string(dim) + " exceeds the supported maximum");
    }
    occupations_.reserve(dim * static_cast<std::size_t>(modes));
    sector_offsets_.push_back(0);
    std::vector<int> prefix;
    for (int total = 0; total <= max_particles; ++total) {
        append_compositions(total, modes, prefix, occupations_);
        sector_offsets_.push_back(occupations_.size() / static_cast<std::size_t>(modes));
    }
    for (std::size_t i = 0; i < dimension(); ++i) {
        const auto s = state(i);
        index_.emplace(std::vector<int>(s.begin(), s.end()), i);
    }
}

std::span<const int> FockBasis::state(std::size_t index) const {
    return {occupations_.data() + index * static_cast<std::size_t>(modes_), static_cast<std::size_t>(modes_)};
}

int FockBasis::total(std::size_t index) const {
    int t = 0;
    for (int n : state(index)) {
        t += n;
    }
    return t;
}

std::ptrdiff_t FockBasis::lookup(std::span<const int> occupation) const {
    if (static_cast<int>(occupation.size()) != modes_) {
        return -1;
    }
    auto it = index_.find(std::vector<int>(occupation.begin(), occupation.end()));
    return it == index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

std::size_t FockBasis::sector_begin(int particles) const {
    return sector_offsets_.at(static_cast<std::size_t>(particles));
}

std::size_t FockBasis::sector_end(int particles) const {
    return sector_offsets_.at(static_cast<std::size_t>(particles) + 1);
}

BasisPtr make_basis(int modes, int max_particles) {
    return std::make_shared<const FockBasis>(modes, max_particles);
}

FockVector::FockVector(BasisPtr basis)
    : basis_(std::move(basis)), amplitudes_(Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis_->dimension()))) {}

FockVector::FockVector(BasisPtr basis, Eigen::VectorXcd amplitudes)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
    if (static_cast<std::size_t>(amplitudes_.size()) != basis_->dimension()) {
        throw ConfigError("amplitude vector does not match basis dimension");
    }
}

FockVector FockVector::basis_state(BasisPtr basis, std::span<const int> occupation) {
    const auto idx = basis->lookup(occupation);
    if (idx < 0) {
        throw ConfigError("occupation vector lies outside the truncated basis");
    }
    FockVector v(std::move(basis));
    v.amplitudes()(idx) = 1.0;
    return v;
}

FockOperator::FockOperator(BasisPtr basis, SparseMatrix matrix, bool hermitian)
    : basis_(std::move(basis)), matrix_(std::move(matrix)), hermitian_(hermitian) {
    const auto dim = static_cast<Eigen::Index>(basis_->dimension());
    if (matrix_.rows() != dim || matrix_.cols() != dim) {
        throw ConfigError("operator matrix does not match basis dimension");
    }
    if (hermitian_) {
        SparseMatrix adj = matrix_.adjoint();
        if (max_abs(matrix_ - adj) >= 1e-12) {
            throw NumericalError("operator flagged hermitian is not hermitian");
        }
    }
}

FockOperator FockOperator::adjoint() const {
    SparseMatrix adj = matrix_.adjoint();
    return {basis_, std::move(adj), hermitian_};
}

FockOperator identity(const BasisPtr& basis) {
    const auto n = static_cast<Eigen::Index>(basis->dimension());
    SparseMatrix m(n, n);
    m.setIdentity();
    return {basis, std::move(m), true};
}

FockOperator annihilate(int mode, const BasisPtr& basis) {
    if (mode < 0 || mode >= basis->modes()) {
        throw ConfigError("mode index " + std::to_string(mode) + " out of range");
    }
    std::vector<Triplet> triplets;
    std::vector<int> target(static_cast<std::size_t>(basis->modes()));
    for (std::size_t j = 0; j < basis->dimension(); ++j) {
        const auto s = basis->state(j);
        const int n = s[static_cast<std::size_t>(mode)];
        if (n == 0) {
            continue;
        }
        target.assign(s.begin(), s.end());
        --target[static_cast<std::size_t>(mode)];
        const auto i = basis->lookup(target);
        triplets.emplace_back(static_cast<int>(i), static_cast<int>(j), std::sqrt(static_cast<double>(n)));
    }
    return {basis, from_triplets(basis->dimension(), triplets), false};
}

FockOperator create(int mode, const BasisPtr& basis) {
    return annihilate(mode, basis).adjoint();
}

FockOperator number_operator(const BasisPtr& basis) {
    std::vector<Triplet> triplets;
    for (std::size_t j = 0; j < basis->dimension(); ++j) {
        triplets.emplace_back(static_cast<int>(j), static_cast<int>(j), static_cast<double>(basis->total(j)));
    }
    return {basis, from_triplets(basis->dimension(), triplets), true};
}

FockOperator trap_hamiltonian(const BasisPtr& basis, const OscillatorParams& params) {
    std::vector<Triplet> triplets;
    for (std::size_t j = 0; j < basis->dimension(); ++j) {
        const auto s = basis->state(j);
        double e = 0.0;
        for (std::size_t k = 0; k < s.size(); ++k) {
            e += params.omega * (static_cast<double>(k) + 0.5) * s[k];
        }
        triplets.emplace_back(static_cast<int>(j), static_cast<int>(j), e);
    }
    return {basis, from_triplets(basis->dimension(), triplets), true};
}

FockOperator build_lambda_operator(Side side, const OverlapTable& table, const BasisPtr& basis) {
    if (table.modes() != basis->modes()) {
        throw ConfigError("overlap table has " + std::to_string(table.modes()) + " modes but basis has " +
                          std::to_string(basis->modes()));
    }
    const Eigen::MatrixXd& lambda = side == Side::Left ? table.left() : table.right();
    const int modes = basis->modes();
    std::vector<Triplet> triplets;
    std::vector<int> target(static_cast<std::size_t>(modes));
    for (std::size_t j = 0; j < basis->dimension(); ++j) {
        const auto s = basis->state(j);
        for (int l = 0; l < modes; ++l) {
            const int nl = s[static_cast<std::size_t>(l)];
            if (nl == 0) {
                continue;
            }
            for (int k = 0; k < modes; ++k) {
                const double coeff = lambda(k, l);
                if (coeff == 0.0) {
                    continue;
                }
                target.assign(s.begin(), s.end());
                --target[static_cast<std::size_t>(l)];
                const int nk = ++target[static_cast<std::size_t>(k)];
                const auto i = basis->lookup(target);
                triplets.emplace_back(static_cast<int>(i), static_cast<int>(j),
                                      coeff * std::sqrt(static_cast<double>(nl) * nk));
            }
        }
    }
    return {basis, from_triplets(basis->dimension(), triplets), true};
}

FockVector apply(const FockOperator& op, const FockVector& v) {
    require_same_basis(op.basis(), v.basis(), "apply");
    return {v.basis(), op.matrix() * v.amplitudes()};
}

complex inner(const FockVector& u, const FockVector& v) {
    require_same_basis(u.basis(), v.basis(), "inner");
    return u.amplitudes().dot(v.amplitudes());
}

FockOperator product(const FockOperator& a, const FockOperator& b) {
    require_same_basis(a.basis(), b.basis(), "product");
    SparseMatrix m = a.matrix() * b.matrix();
    return {a.basis(), std::move(m), false};
}

FockOperator commutator(const FockOperator& a, const FockOperator& b) {
    require_same_basis(a.basis(), b.basis(), "commutator");
    SparseMatrix m = a.matrix() * b.matrix() - b.matrix() * a.matrix();
    return {a.basis(), std::move(m), false};
}

double max_abs(const SparseMatrix& m) {
    double best = 0.0;
    for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
        for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
            best = std::max(best, std::abs(it.value()));
        }
    }
    return best;
}

LocalityResidual locality_residual(const OverlapTable& table, int block) {
    const auto basis = make_basis(table.modes(), 1);
    const auto lambda_l = build_lambda_operator(Side::Left, table, basis);
    const auto lambda_r = build_lambda_operator(Side::Right, table, basis);
    const auto prod = product(lambda_l, lambda_r);
    const auto comm = commutator(lambda_l, lambda_r);

    LocalityResidual out;
    out.modes = table.modes();
    out.block = std::min(block, table.modes());
    const auto first = static_cast<Eigen::Index>(basis->sector_begin(1));
    const auto last = static_cast<Eigen::Index>(basis->sector_end(1));
    std::vector<int> occ(static_cast<std::size_t>(table.modes()), 0);
    std::vector<Eigen::Index> low;
    for (int k = 0; k < out.block; ++k) {
        occ.assign(occ.size(), 0);
        occ[static_cast<std::size_t>(k)] = 1;
        low.push_back(basis->lookup(occ));
    }
    for (Eigen::Index r = first; r < last; ++r) {
        for (SparseMatrix::InnerIterator it(comm.matrix(), r); it; ++it) {
            out.commutator = std::max(out.commutator, std::abs(it.value()));
        }
    }
    for (auto r : low) {
        for (auto c : low) {
            out.product = std::max(out.product, std::abs(prod.matrix().coeff(r, c)));
        }
    }
    return out;
}

void write_operator_csv(const FockOperator& op, std::ostream& out) {
    out << "row,col,re,im\n" << std::setprecision(17);
    const auto& m = op.matrix();
    for (Eigen::Index r = 0; r < m.outerSize(); ++r) {
        for (SparseMatrix::InnerIterator it(m, r); it; ++it) {
            if (it.value() == complex{0.0, 0.0}) {
                continue;
            }
            out << it.row() << ',' << it.col() << ',' << it.value().real() << ',' << it.value().imag() << '\n';
        }
    }
}

}  // namespace eprx
