#include "eprx/validation.hpp"

#include "eprx/entanglement.hpp"
#include "eprx/errors.hpp"
#include "eprx/evolution.hpp"
#include "eprx/measurement.hpp"
#include "eprx/moments.hpp"
#include "eprx/sweep.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <cmath>

namespace eprx {

ValidationOptions ValidationOptions::from(const ExperimentConfig& config) {
    ValidationOptions options;
    options.trap = config.trap;
    options.quadrature = config.quadrature();
    options.dim_cap = config.dim_cap;
    options.regime_amplitude = config.regime_amplitude;
    options.quartic_reference = config.quartic_reference;
    return options;
}

PowerFit fit_power_law(const std::vector<double>& x, const std::vector<double>& y, double level) {
    if (x.size() != y.size() || x.size() < 3) {
        throw ConfigError("power-law fit needs at least three (x, y) pairs");
    }
    const auto n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0 && y[i] > 0.0)) {
            throw NumericalError("power-law fit needs positive data");
        }
        lx.push_back(std::log(x[i]));
        ly.push_back(std::log(y[i]));
        mx += lx.back() / n;
        my += ly.back() / n;
    }
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    PowerFit fit;
    fit.points = static_cast<int>(x.size());
    fit.exponent = sxy / sxx;
    fit.intercept = my - fit.exponent * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double r = ly[i] - fit.intercept - fit.exponent * lx[i];
        sse += r * r;
    }
    const double se = std::sqrt(sse / (n - 2.0) / sxx);
    const boost::math::students_t dist(n - 2.0);
    const double t = boost::math::quantile(boost::math::complement(dist, (1.0 - level) / 2.0));
    fit.ci_low = fit.exponent - t * se;
    fit.ci_high = fit.exponent + t * se;
    return fit;
}

namespace {

void residual_ladder(const ValidationOptions& options, ValidationReport& report) {
    const auto table = build_overlap_table(options.ladder_modes, options.trap, options.quadrature);
    const auto basis = make_basis(options.ladder_modes, options.ladder_max_particles);
    const auto lambda_l = build_lambda_operator(Side::Left, table, basis);
    const auto lambda_r = build_lambda_operator(Side::Right, table, basis);
    const auto state = make_state(StateDescriptor::fock(options.ladder_number), options.ladder_max_particles);
    const auto phi = to_fock_vector(state.components().front(), basis);

    ProbeParams probes;
    probes.levels = options.ladder_levels;
    ExactOptions exact;
    exact.dim_cap = options.dim_cap;

    const double g0 = default_regime_area(moments_from_state(state, table).s, probes, options.regime_amplitude);
    std::vector<double> areas, residuals;
    for (int i = 0; i <= options.halvings; ++i) {
        LadderRow row;
        row.area = std::ldexp(g0, -i);
        row.duration = row.area / options.amplitude;
        const auto pulse = Pulse::square_with_area(row.area, row.duration);
        const auto initial = JointState::product(phi, probes.levels);
        const auto result = exact_state(initial, lambda_l, lambda_r, pulse, probes, options.include_h0, exact, options.trap);
        const auto first = perturbative_state(phi, lambda_l, lambda_r, pulse, probes, options.include_h0, options.trap);
        row.residual = (result.state.amplitudes() - first.amplitudes()).norm();
        if (!report.ladder.empty()) {
            row.ratio = report.ladder.back().residual / row.residual;
        }
        const auto block = postselect(result.state);
        row.p_succ = block.success_probability;
        row.leakage_fraction = block.leakage_fraction();
        areas.push_back(row.area);
        residuals.push_back(row.residual);
        report.ladder.push_back(row);
    }
    report.residual_fit = fit_power_law(areas, residuals);
    report.default_leakage_fraction = report.ladder.front().leakage_fraction;
}

void quartic_scaling(const ValidationOptions& options, const OverlapTable& table, ValidationReport& report) {
    const ProbeParams probes;
    std::vector<double> xs, ps;
    for (double a2 : options.scaling_alpha_sq) {
        const auto state = make_state(StateDescriptor::coherent(std::sqrt(a2)));
        const auto moments = extrapolated_moments(state, table);
        ScalingRow row;
        row.alpha_sq = a2;
        row.area = quartic_scaling_area(a2, options.quartic_reference);
        row.p_succ = block_from_moments(moments, row.area, probes, number_moments(state).total).success_probability;
        xs.push_back(a2);
        ps.push_back(row.p_succ);
        report.scaling.push_back(row);
    }
    report.scaling_fit = fit_power_law(xs, ps);
}

void superpositions(const OverlapTable& table, ValidationReport& report) {
    const double h = 1.0 / std::sqrt(2.0);
    const std::vector<std::pair<std::string, std::vector<complex>>> family{
        {"0+1", {h, h}},
        {"0+i1", {h, complex(0.0, h)}},
        {"0+2", {h, 0.0, h}},
        {"1+2", {0.0, h, h}},
        {"0+1+2", {1.0, 1.0, 1.0}},
        {"2+3", {0.0, 0.0, h, h}},
        {"1+3", {0.0, h, 0.0, h}},
        {"0.9*0+0.1*4", {0.9, 0.0, 0.0, 0.0, 0.1}},
    };
    for (const auto& [label, coefficients] : family) {
        const auto state = make_state(StateDescriptor::superposition(coefficients));
        const auto moments = extrapolated_moments(state, table);
        SuperpositionRow row;
        row.label = label;
        row.coefficients = coefficients;
        row.mu_structural = moments.structural_negativity();
        row.mu = negativity(to_bipartite(block_from_moments(moments, 0.01, ProbeParams{}, number_moments(state).total)));
        report.superpositions.push_back(row);
    }
}

}  // namespace

ValidationReport residual_ladder_report(const ValidationOptions& options) {
    ValidationReport report;
    residual_ladder(options, report);
    return report;
}

std::vector<CommutatorRow> commutator_table(const ValidationOptions& options) {
    std::vector<CommutatorRow> rows;
    for (int k : options.commutator_modes) {
        const auto r = locality_residual(cached_overlap_table(k, options.trap, options.quadrature), options.commutator_block);
        rows.push_back({k, r.product, r.commutator});
    }
    return rows;
}

ValidationReport run_validation(const ValidationOptions& options) {
    ValidationReport report = residual_ladder_report(options);
    const auto table = cached_overlap_table(options.scaling_modes, options.trap, options.quadrature);
    quartic_scaling(options, table, report);
    superpositions(table, report);
    report.commutators = commutator_table(options);
    return report;
}

void write_validation_csv(const ValidationReport& report, std::ostream& out) {
    out << "section,name,x,value\n";
    auto line = [&](const char* section, const std::string& name, const std::string& x, double value) {
        out << section << ',' << name << ',' << x << ',' << format_double(value) << '\n';
    };
    for (const auto& r : report.ladder) {
        const auto g = format_double(r.area);
        line("residual_ladder", "duration", g, r.duration);
        line("residual_ladder", "residual", g, r.residual);
        if (r.ratio > 0.0) {
            line("residual_ladder", "ratio", g, r.ratio);
        }
        line("residual_ladder", "p_succ", g, r.p_succ);
        line("residual_ladder", "leakage_fraction", g, r.leakage_fraction);
    }
    line("residual_fit", "exponent", "", report.residual_fit.exponent);
    line("residual_fit", "ci95_low", "", report.residual_fit.ci_low);
    line("residual_fit", "ci95_high", "", report.residual_fit.ci_high);
    line("leakage", "default_regime_fraction", "", report.default_leakage_fraction);
    for (const auto& r : report.scaling) {
        const auto x = format_double(r.alpha_sq);
        line("quartic_scaling", "pulse_area", x, r.area);
        line("quartic_scaling", "p_succ", x, r.p_succ);
    }
    line("quartic_scaling_fit", "exponent_alpha_sq", "", report.scaling_fit.exponent);
    line("quartic_scaling_fit", "ci95_low", "", report.scaling_fit.ci_low);
    line("quartic_scaling_fit", "ci95_high", "", report.scaling_fit.ci_high);
    for (const auto& r : report.commutators) {
        const auto k = std::to_string(r.modes);
        line("commutator", "product_residual", k, r.product);
        line("commutator", "literal_commutator", k, r.commutator);
    }
    for (const auto& r : report.superpositions) {
        line("superposition", "mu", r.label, r.mu);
        line("superposition", "mu_structural", r.label, r.mu_structural);
    }
}

}  // namespace eprx
