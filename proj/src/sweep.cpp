#include "eprx/sweep.hpp"

#include "eprx/entanglement.hpp"
#include "eprx/errors.hpp"
#include "eprx/evolution.hpp"
#include "eprx/measurement.hpp"
#include "eprx/moments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

namespace eprx {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

double pulse_area_for(const ExperimentConfig& config, const ProbeBlockMoments& moments, double value) {
    switch (config.regime) {
        case PulseRegime::Amplitude: return default_regime_area(moments.s, config.probes, config.regime_amplitude);
        case PulseRegime::QuarticScaling: return quartic_scaling_area(value, config.quartic_reference);
        case PulseRegime::Fixed: break;
    }
    if (config.pulse_shape == "sampled") {
        return Pulse::sampled(config.pulse_duration, config.pulse_samples).area();
    }
    return config.pulse_area;
}

Pulse make_pulse(const ExperimentConfig& config, double area) {
    if (config.pulse_shape == "sampled") {
        return Pulse::sampled(config.pulse_duration, config.pulse_samples);
    }
    const double duration = config.pulse_duration > 0.0 ? config.pulse_duration : area / config.pulse_amplitude;
    return Pulse::square_with_area(area, duration);
}

ProbeBlock exact_block(const ExperimentConfig& config, const TrapState& state, const OverlapTable& table,
                       const Pulse& pulse) {
    const auto basis = make_basis(table.modes(), config.max_particles);
    const auto lambda_l = build_lambda_operator(Side::Left, table, basis);
    const auto lambda_r = build_lambda_operator(Side::Right, table, basis);
    ExactOptions options;
    options.dim_cap = config.dim_cap;
    std::vector<ProbeBlock> blocks;
    std::vector<double> weights;
    for (const auto& component : state.components()) {
        if (component.weight == 0.0) {
            continue;
        }
        const auto joint0 = JointState::product(to_fock_vector(component, basis), config.probes.levels);
        const auto result =
            exact_state(joint0, lambda_l, lambda_r, pulse, config.probes, config.include_h0, options, config.trap);
        try {
            blocks.push_back(postselect(result.state));
            weights.push_back(component.weight);
        } catch (const NoExtractionEvent&) {
            // Components with nothing to extract (vacuum) only dilute p_succ.
            ProbeBlock empty;
            blocks.push_back(empty);
            weights.push_back(component.weight);
        }
    }
    return mix_blocks(blocks, weights);
}

}  // namespace

SweepRow compute_point(const ExperimentConfig& config, double value, const OverlapTable* table) {
    const auto started = std::chrono::steady_clock::now();
    SweepRow row;
    row.kind = config.kind;
    if (config.kind != StateKind::Superposition) {
        row.parameter = value;
    }
    row.path = config.path;
    row.modes = config.path == ComputePath::Analytic ? 0 : config.modes;
    try {
        const int max_cut = (config.path == ComputePath::Fock || config.path == ComputePath::Exact)
                                ? std::min(config.max_cutoff, config.max_particles)
                                : config.max_cutoff;
        const auto state = make_state(config.descriptor(value), max_cut, config.tol.tail);
        row.tail_mass = state.tail_mass();

        OverlapSums sums = limit_overlap_sums();
        ProbeBlockMoments moments;
        switch (config.path) {
            case ComputePath::Analytic: moments = analytic_limit_moments(state); break;
            case ComputePath::Moments: {
                const auto raw = moments_from_state(state, *table);
                row.mu_finite_k = raw.structural_negativity();
                row.t_lr_finite_k = overlap_sums(*table).t_lr;
                if (config.use_extrapolation()) {
                    sums = extrapolated_overlap_sums(*table);
                    moments = extrapolated_moments(state, *table);
                } else {
                    sums = overlap_sums(*table);
                    moments = raw;
                }
                row.t_lr = sums.t_lr;
                break;
            }
            case ComputePath::Fock:
            case ComputePath::Exact:
                sums = overlap_sums(*table);
                moments = config.path == ComputePath::Fock ? moments_from_fock(state, *table)
                                                           : moments_from_state(state, *table);
                row.t_lr = sums.t_lr;
                row.t_lr_finite_k = sums.t_lr;
                break;
        }
        row.extrapolation_error = moments.extrapolation_error;
        row.pulse_area = pulse_area_for(config, moments, value);

        ProbeBlock block;
        if (config.path == ComputePath::Exact) {
            block = exact_block(config, state, *table, make_pulse(config, row.pulse_area));
            row.leakage = block.leakage;
        } else {
            block = block_from_moments(moments, row.pulse_area, config.probes, number_moments(state).total);
        }
        row.p_succ = block.success_probability;
        row.mu = negativity(to_bipartite(block));

        switch (config.kind) {
            case StateKind::Coherent:
            case StateKind::PhaseAveraged:
            case StateKind::Number:
                row.mu_closed = negativity_closed_form(config.kind, value);
                row.mu_closed_source = config.kind == StateKind::PhaseAveraged ? "derived" : "closed_form";
                break;
            case StateKind::Thermal:
                row.mu_closed = thermal_negativity_closed_form(value);
                row.mu_closed_source = "derived";
                break;
            default: break;
        }
        if (state.is_pure() && moments.m_ll > 0.0) {
            row.fidelity = disturbance_fidelity(state, sums);
        }
        if (config.kind == StateKind::Coherent && value > 0.0) {
            row.fidelity_closed = fidelity_closed_form(value);
        }
    } catch (const std::exception& e) {
        row.error = e.what();
    }
    row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return row;
}

SweepResult run_sweep(const ExperimentConfig& config) {
    config.validate();
    std::optional<OverlapTable> table;
    if (config.path != ComputePath::Analytic) {
        table = cached_overlap_table(config.modes, config.trap, config.quadrature());
    }
    std::vector<double> values = config.values;
    if (config.kind == StateKind::Superposition) {
        values = {0.0};
    }
    SweepResult result;
    result.rows.resize(values.size());
    const unsigned hw = std::max(1U, std::thread::hardware_concurrency());
    const auto workers = std::min<std::size_t>(values.size(), config.workers > 0 ? static_cast<unsigned>(config.workers) : hw);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < values.size(); i = next++) {
            result.rows[i] = compute_point(config, values[i], table ? &*table : nullptr);
        }
    };
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < workers; ++w) {
        pool.emplace_back(work);
    }
    work();
    pool.clear();
    return result;
}

namespace {

std::string opt(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string{};
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') {
            out += "\"\"";
        } else if (c == '\n') {
            out += ' ';
        } else {
            out += c;
        }
    }
    return out + "\"";
}

}  // namespace

void write_sweep_csv(const SweepResult& result, std::ostream& out, bool timing) {
    out << "kind,parameter,K,path,pulse_area,mu,mu_closed,mu_closed_source,mu_finite_k,fidelity,fidelity_closed,"
           "p_succ,leakage,t_lr,t_lr_finite_k,tail_mass,extrapolation_error";
    if (timing) {
        out << ",wall_time";
    }
    out << ",error\n";
    for (const auto& r : result.rows) {
        out << to_string(r.kind) << ',' << opt(r.parameter) << ',' << r.modes << ',' << to_string(r.path) << ',';
        if (r.error.empty()) {
            out << format_double(r.pulse_area) << ',' << format_double(r.mu) << ',' << opt(r.mu_closed) << ','
                << r.mu_closed_source << ',' << opt(r.mu_finite_k) << ',' << opt(r.fidelity) << ','
                << opt(r.fidelity_closed) << ',' << format_double(r.p_succ) << ',' << opt(r.leakage) << ','
                << opt(r.t_lr) << ',' << opt(r.t_lr_finite_k) << ',' << format_double(r.tail_mass) << ','
                << format_double(r.extrapolation_error);
        } else {
            out << ",,,,,,,,,,,,";
        }
        if (timing) {
            out << ',' << format_double(r.wall_time);
        }
        out << ',' << csv_escape(r.error) << '\n';
    }
}

void write_plot_data(const SweepResult& result, std::ostream& out) {
    out << "series,x,y\n";
    auto emit = [&](const char* series, auto getter) {
        for (const auto& r : result.rows) {
            if (!r.error.empty() || !r.parameter) {
                continue;
            }
            const std::optional<double> y = getter(r);
            if (y) {
                out << series << ',' << format_double(*r.parameter) << ',' << format_double(*y) << '\n';
            }
        }
    };
    emit("mu", [](const SweepRow& r) { return std::optional<double>(r.mu); });
    emit("mu_closed", [](const SweepRow& r) { return r.mu_closed; });
    emit("fidelity", [](const SweepRow& r) { return r.fidelity; });
    emit("fidelity_closed", [](const SweepRow& r) { return r.fidelity_closed; });
    emit("p_succ", [](const SweepRow& r) { return std::optional<double>(r.p_succ); });
}

void run_sweep_to_files(const ExperimentConfig& config) {
    const auto result = run_sweep(config);
    if (config.output.has_parent_path()) {
        std::filesystem::create_directories(config.output.parent_path());
    }
    {
        std::ofstream out(config.output);
        if (!out) {
            throw ConfigError("output: cannot write " + config.output.string());
        }
        write_sweep_csv(result, out, config.timing);
    }
    if (config.plot_data) {
        std::ofstream plot(config.output.string() + ".plot.csv");
        write_plot_data(result, plot);
    }
}

}  // namespace eprx
