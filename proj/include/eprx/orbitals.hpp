#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace eprx {

/// Trap oscillator. hbar is fixed to 1.
struct OscillatorParams {
    double mass = 1.0;
    double omega = 1.0;

    void validate() const;
};

struct QuadratureOptions {
    double tolerance = 1e-12;
    int nodes_per_panel = 20;
    int max_refinements = 8;
};

/// Half-line overlaps of the first K trap orbitals,
///   lambda_R(k,l) = int_0^inf phi_k phi_l dx,   lambda_L = I - lambda_R.
/// Entries with k+l even are exactly delta_kl / 2 by parity.
class OverlapTable {
public:
    OverlapTable(OscillatorParams params, Eigen::MatrixXd left, Eigen::MatrixXd right,
                 double quadrature_error, double quadrature_tolerance);

    [[nodiscard]] int modes() const noexcept { return static_cast<int>(left_.rows()); }
    [[nodiscard]] const OscillatorParams& params() const noexcept { return params_; }
    [[nodiscard]] const Eigen::MatrixXd& left() const noexcept { return left_; }
    [[nodiscard]] const Eigen::MatrixXd& right() const noexcept { return right_; }
    [[nodiscard]] double left(int k, int l) const { return left_(k, l); }
    [[nodiscard]] double right(int k, int l) const { return right_(k, l); }
    /// Global bound: max change of any entry under the last panel refinement.
    [[nodiscard]] double quadrature_error() const noexcept { return quadrature_error_; }
    [[nodiscard]] double quadrature_tolerance() const noexcept { return quadrature_tolerance_; }

    /// Leading K x K corner of this table (the overlaps do not depend on K).
    [[nodiscard]] OverlapTable truncated(int modes) const;

private:
    OscillatorParams params_;
    Eigen::MatrixXd left_;
    Eigen::MatrixXd right_;
    double quadrature_error_;
    double quadrature_tolerance_;
};

/// Normalized Hermite function phi_k(x). Evaluated by the three-term
/// recurrence on normalized functions with a running log scale, so it returns
/// 0 (never NaN or inf) far outside the classical region.
[[nodiscard]] double eval_orbital(int k, double x, const OscillatorParams& params = {});

/// phi_0(x) .. phi_{K-1}(x) in one recurrence pass.
[[nodiscard]] std::vector<double> eval_orbitals(int modes, double x,
                                                const OscillatorParams& params = {});

/// Right end of the integration interval (in x units) used for K modes.
[[nodiscard]] double integration_cutoff(int modes, const OscillatorParams& params);

/// n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};
[[nodiscard]] GaussLegendreRule gauss_legendre(int n);

/// Composite Gauss-Legendre on [0, X_max], panel count doubled until every
/// odd-parity entry moves by less than the tolerance. Throws NumericalError
/// naming the worst (k,l) when refinement is exhausted.
[[nodiscard]] OverlapTable build_overlap_table(int modes, const OscillatorParams& params = {},
                                               const QuadratureOptions& options = {});

/// Same as build_overlap_table, memoized in-process and optionally cached to
/// `cache_dir` (falls back to $EPRX_CACHE_DIR when not given).
[[nodiscard]] OverlapTable cached_overlap_table(int modes, const OscillatorParams& params = {},
                                                const QuadratureOptions& options = {},
                                                std::optional<std::filesystem::path> cache_dir = {});

/// CSV with header `k,l,lambdaL,lambdaR`, row-major, 17 significant digits.
void write_overlap_csv(const OverlapTable& table, std::ostream& out);
void write_overlap_csv(const OverlapTable& table, const std::filesystem::path& path);
[[nodiscard]] OverlapTable read_overlap_csv(const std::filesystem::path& path,
                                            const OscillatorParams& params = {});

}  // namespace eprx
