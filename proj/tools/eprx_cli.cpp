// eprx: overlap tables, sweeps, validation reports, sampling and acceptance
// targets from the command line.
//
// Exit codes: 0 success, 1 invalid input, 2 numerical tolerance not met
// (including failed acceptance criteria and failed sweep points).

#include "eprx/acceptance.hpp"
#include "eprx/config.hpp"
#include "eprx/errors.hpp"
#include "eprx/fock.hpp"
#include "eprx/measurement.hpp"
#include "eprx/orbitals.hpp"
#include "eprx/sweep.hpp"
#include "eprx/validation.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kNumerical = 2;

struct ConfigArgs {
    std::string file;
    std::vector<std::string> overrides;

    void attach(CLI::App* app) {
        app->add_option("-c,--config", file, "key = value config file")->check(CLI::ExistingFile);
        app->add_option("-s,--set", overrides, "override, e.g. --set modes=256 (repeatable)");
    }

    [[nodiscard]] eprx::ExperimentConfig load() const {
        auto kv = file.empty() ? eprx::KeyValueConfig{} : eprx::KeyValueConfig::load(file);
        for (const auto& o : overrides) {
            kv.set_assignment(o);
        }
        auto config = eprx::experiment_from(kv);
        return config;
    }
};

// Writes to `path`, or stdout for "" / "-".
template <class Fn>
void emit(const std::string& path, Fn&& write) {
    if (path.empty() || path == "-") {
        write(std::cout);
        return;
    }
    const std::filesystem::path p(path);
    if (p.has_parent_path()) {
        std::filesystem::create_directories(p.parent_path());
    }
    std::ofstream out(p, std::ios::binary);
    if (!out) {
        throw eprx::ConfigError("cannot write " + path);
    }
    write(out);
}

int cmd_lambda(int modes, double mass, double omega, double tol, const std::string& out, const std::string& op_side,
               int op_particles, const std::string& op_out) {
    eprx::OscillatorParams params{mass, omega};
    eprx::QuadratureOptions q;
    q.tolerance = tol;
    const auto table = eprx::cached_overlap_table(modes, params, q);
    emit(out, [&](std::ostream& os) { eprx::write_overlap_csv(table, os); });
    if (!op_side.empty()) {
        const auto side = op_side == "left" ? eprx::Side::Left : eprx::Side::Right;
        const auto basis = eprx::make_basis(modes, op_particles);
        const auto op = eprx::build_lambda_operator(side, table, basis);
        emit(op_out, [&](std::ostream& os) { eprx::write_operator_csv(op, os); });
    }
    return kOk;
}

int cmd_sweep(const ConfigArgs& args, const std::string& output) {
    auto config = args.load();
    if (!output.empty()) {
        config.output = output;
    }
    config.validate();
    const auto result = eprx::run_sweep(config);
    emit(config.output.string(), [&](std::ostream& os) { eprx::write_sweep_csv(result, os, config.timing); });
    if (config.plot_data && config.output != "-") {
        emit(config.output.string() + ".plot.csv", [&](std::ostream& os) { eprx::write_plot_data(result, os); });
    }
    int failed = 0;
    for (const auto& r : result.rows) {
        if (!r.error.empty()) {
            std::cerr << "point " << (r.parameter ? eprx::format_double(*r.parameter) : "-") << ": " << r.error << '\n';
            ++failed;
        }
    }
    return failed == 0 ? kOk : kNumerical;
}

int cmd_validate(const ConfigArgs& args, const std::string& output) {
    const auto config = args.load();
    const auto report = eprx::run_validation(eprx::ValidationOptions::from(config));
    emit(output, [&](std::ostream& os) { eprx::write_validation_csv(report, os); });
    return kOk;
}

int cmd_sample(const ConfigArgs& args, std::vector<std::uint64_t> shots, std::optional<std::uint64_t> seed,
               const std::string& output) {
    auto config = args.load();
    if (config.values.size() > 1) {
        throw eprx::ConfigError("sample: give exactly one state parameter");
    }
    config.validate();
    const auto result = eprx::run_sweep(config);
    const auto& row = result.rows.front();
    if (!row.error.empty()) {
        throw eprx::NumericalError(row.error);
    }
    const std::uint64_t s = seed.value_or(config.seed);
    emit(output, [&](std::ostream& os) {
        os << "shots,successes,p_succ_est,p_succ_exact\n";
        for (auto n : shots) {
            const auto counts = eprx::sample_outcomes(row.p_succ, n, s);
            os << n << ',' << counts.successes << ','
               << eprx::format_double(static_cast<double>(counts.successes) / static_cast<double>(n)) << ','
               << eprx::format_double(row.p_succ) << '\n';
        }
    });
    return kOk;
}

int cmd_accept(const std::string& target, const std::string& out_dir, int modes, std::uint64_t seed) {
    eprx::AcceptanceOptions options;
    options.modes = modes;
    options.seed = seed;
    if (!out_dir.empty()) {
        options.output_dir = out_dir;
    }
    bool all_passed = true;
    const auto& names = eprx::acceptance_targets();
    std::vector<std::string> targets;
    if (target == "all" || target == "accept:all") {
        targets = names;
    } else {
        targets = {target};
    }
    for (const auto& t : targets) {
        const auto result = eprx::run_acceptance_target(t, options);
        std::cout << eprx::format_result_line(result) << std::endl;
        all_passed = all_passed && result.passed;
    }
    return all_passed ? kOk : kNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"eprx: entanglement extraction from trapped bosons"};
    app.require_subcommand(1);

    int modes = 64;
    double mass = 1.0, omega = 1.0, qtol = 1e-12;
    std::string lambda_out, op_side, op_out;
    int op_particles = 1;
    auto* lambda = app.add_subcommand("lambda", "write the half-space overlap table k,l,lambdaL,lambdaR");
    lambda->add_option("-K,--modes", modes, "number of trap modes")->check(CLI::PositiveNumber);
    lambda->add_option("--mass", mass, "trap particle mass");
    lambda->add_option("--omega", omega, "trap frequency");
    lambda->add_option("--tol", qtol, "quadrature tolerance");
    lambda->add_option("-o,--out", lambda_out, "output CSV (default stdout)");
    lambda->add_option("--operator", op_side, "also dump Lambda_L or Lambda_R as row,col,re,im")
        ->check(CLI::IsMember({"left", "right"}));
    lambda->add_option("--n-max", op_particles, "particle cap for --operator")->check(CLI::NonNegativeNumber);
    lambda->add_option("--operator-out", op_out, "operator CSV (default stdout)");

    ConfigArgs sweep_args;
    std::string sweep_out;
    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep and write CSV plus plot data");
    sweep_args.attach(sweep);
    sweep->add_option("-o,--out", sweep_out, "output CSV (overrides config 'output')");

    ConfigArgs validate_args;
    std::string validate_out;
    auto* validate = app.add_subcommand("validate", "perturbation-validity and convergence report");
    validate_args.attach(validate);
    validate->add_option("-o,--out", validate_out, "output CSV (default stdout)");

    ConfigArgs sample_args;
    std::vector<std::uint64_t> shots{1000};
    std::optional<std::uint64_t> sample_seed;
    std::string sample_out;
    auto* sample = app.add_subcommand("sample", "simulate post-selection shots for one state");
    sample_args.attach(sample);
    sample->add_option("-n,--shots", shots, "shot counts (repeatable)")->check(CLI::PositiveNumber);
    sample->add_option("--seed", sample_seed, "RNG seed (default: config 'seed')");
    sample->add_option("-o,--out", sample_out, "output CSV (default stdout)");

    std::string target;
    std::string accept_dir;
    int accept_modes = 512;
    std::uint64_t accept_seed = 20240611;
    auto* accept = app.add_subcommand("accept", "run an acceptance target (eq8, eq9, eq10, oracle, perturbation, "
                                                "commutator, structural, mixtures, determinism or all)");
    accept->add_option("target", target, "target name, optionally prefixed with accept:")->required();
    accept->add_option("-o,--out", accept_dir, "directory for accept_<target>.csv");
    accept->add_option("-K,--modes", accept_modes, "mode count for the K-limited criteria");
    accept->add_option("--seed", accept_seed, "seed for randomized checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInvalid;
    }

    try {
        if (*lambda) {
            return cmd_lambda(modes, mass, omega, qtol, lambda_out, op_side, op_particles, op_out);
        }
        if (*sweep) {
            return cmd_sweep(sweep_args, sweep_out);
        }
        if (*validate) {
            return cmd_validate(validate_args, validate_out);
        }
        if (*sample) {
            return cmd_sample(sample_args, shots, sample_seed, sample_out);
        }
        if (*accept) {
            return cmd_accept(target, accept_dir, accept_modes, accept_seed);
        }
    } catch (const eprx::ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
    } catch (const eprx::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInvalid;
    }
    return kOk;
}
