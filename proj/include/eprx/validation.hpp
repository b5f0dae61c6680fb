#pragma once

#include "eprx/config.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace eprx {

/// Knobs of the perturbation-validity report. Defaults are the small
/// exact-path setup: K=4, n_max=3, |N=2>, four probe levels, H0 on.
struct ValidationOptions {
    int ladder_modes = 4;
    int ladder_max_particles = 3;
    int ladder_number = 2;
    int ladder_levels = 4;
    bool include_h0 = true;
    /// g is halved this many times, starting from the default-regime area.
    int halvings = 3;
    /// Pulse amplitude g0 held fixed along the ladder, so T = g / g0.
    double amplitude = 1.0;
    double regime_amplitude = 0.1;
    std::size_t dim_cap = 20000;

    std::vector<double> scaling_alpha_sq{1, 2, 4, 8, 16, 32, 64};
    double quartic_reference = 0.1;
    int scaling_modes = 512;

    std::vector<int> commutator_modes{8, 16, 32, 64};
    int commutator_block = 8;

    OscillatorParams trap;
    QuadratureOptions quadrature;

    static ValidationOptions from(const ExperimentConfig& config);
};

struct LadderRow {
    double area = 0.0;
    double duration = 0.0;
    double residual = 0.0;
    double ratio = 0.0;  // previous residual / this one; 0 on the first rung
    double p_succ = 0.0;
    double leakage_fraction = 0.0;
};

struct ScalingRow {
    double alpha_sq = 0.0;
    double area = 0.0;
    double p_succ = 0.0;
};

struct CommutatorRow {
    int modes = 0;
    double product = 0.0;
    double commutator = 0.0;
};

/// Least-squares line through (log x, log y) with a Student-t interval on the slope.
struct PowerFit {
    double exponent = 0.0;
    double intercept = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    int points = 0;
};

[[nodiscard]] PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y, double level = 0.95);

struct SuperpositionRow {
    std::string label;
    std::vector<complex> coefficients;
    double mu = 0.0;
    double mu_structural = 0.0;
};

struct ValidationReport {
    std::vector<LadderRow> ladder;
    PowerFit residual_fit;
    double default_leakage_fraction = 0.0;
    std::vector<ScalingRow> scaling;
    PowerFit scaling_fit;
    std::vector<CommutatorRow> commutators;
    std::vector<SuperpositionRow> superpositions;
};

[[nodiscard]] ValidationReport run_validation(const ValidationOptions& options = {});

/// Only the exact-vs-first-order ladder, its fit and the default-regime leakage.
[[nodiscard]] ValidationReport residual_ladder_report(const ValidationOptions& options = {});

/// Single-particle-block locality residual for each of options.commutator_modes.
[[nodiscard]] std::vector<CommutatorRow> commutator_table(const ValidationOptions& options = {});

/// Long format `section,name,x,value`, 17 significant digits.
void write_validation_csv(const ValidationReport& report, std::ostream& out);

}  // namespace eprx
