#pragma once

#include "eprx/config.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace eprx {

/// One parameter point. Optional columns are written empty, not zero, when
/// they do not apply (no closed form, no leakage outside the exact path).
struct SweepRow {
    StateKind kind = StateKind::Coherent;
    std::optional<double> parameter;
    int modes = 0;
    ComputePath path = ComputePath::Moments;
    double pulse_area = 0.0;
    double mu = 0.0;
    std::optional<double> mu_closed;
    std::string mu_closed_source;  // "closed_form" or "derived"
    std::optional<double> mu_finite_k;
    std::optional<double> fidelity;
    std::optional<double> fidelity_closed;
    double p_succ = 0.0;
    std::optional<double> leakage;
    std::optional<double> t_lr;
    std::optional<double> t_lr_finite_k;
    double tail_mass = 0.0;
    double extrapolation_error = 0.0;
    double wall_time = 0.0;
    std::string error;
};

struct SweepResult {
    std::vector<SweepRow> rows;
};

/// Evaluates one point; numerical failures are returned in row.error.
[[nodiscard]] SweepRow compute_point(const ExperimentConfig& config, double value, const OverlapTable* table);

/// All points, in a worker pool; rows come back in input order.
[[nodiscard]] SweepResult run_sweep(const ExperimentConfig& config);

void write_sweep_csv(const SweepResult& result, std::ostream& out, bool timing = false);
/// `series,x,y` pairs for external plotting.
void write_plot_data(const SweepResult& result, std::ostream& out);

/// Runs the sweep and writes config.output (plus `<output>.plot.csv`).
void run_sweep_to_files(const ExperimentConfig& config);

/// `%.17g`: 17 significant digits, round-trips every double.
[[nodiscard]] std::string format_double(double v);

}  // namespace eprx
