#include "eprx/acceptance.hpp"

#include "eprx/entanglement.hpp"
#include "eprx/errors.hpp"
#include "eprx/measurement.hpp"
#include "eprx/moments.hpp"
#include "eprx/sweep.hpp"
#include "eprx/validation.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>

namespace eprx {

namespace {

constexpr double kPipelineTol = 1e-3;
constexpr double kOracleTol = 1e-12;
constexpr double kStructuralTol = 1e-12;
constexpr double kRuntimeBudget = 60.0;

const char* const kLimitNote =
    "the |alpha| -> infinity limit (mu -> 1/2, F -> 1) is not reachable numerically; it is covered by the "
    "monotonicity checks here plus the analytic-limit moments (T_LL = T_RR = 1/2, T_LR = 0)";

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

AcceptanceResult started(int criterion, std::string target, std::string title) {
    AcceptanceResult r;
    r.criterion = criterion;
    r.target = std::move(target);
    r.title = std::move(title);
    return r;
}

std::string fmt(double v) {
    return format_double(v);
}

ExperimentConfig pipeline_config(StateKind kind, std::vector<double> values, int modes) {
    ExperimentConfig c;
    c.kind = kind;
    c.values = std::move(values);
    c.modes = modes;
    c.path = ComputePath::Moments;
    c.tol.tail = 1e-12;
    return c;
}

bool strictly_increasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] > v[i - 1])) {
            return false;
        }
    }
    return true;
}

std::string row_error(const SweepResult& result) {
    for (const auto& r : result.rows) {
        if (!r.error.empty()) {
            return r.error;
        }
    }
    return {};
}

AcceptanceResult eq8(const AcceptanceOptions& options) {
    auto out = started(1, "eq8", "coherent-state negativity 1/2 |a|^2/(2+|a|^2)");
    const auto start = Clock::now();
    const auto sweep = run_sweep(pipeline_config(StateKind::Coherent, {0.5, 1, 2, 4, 8}, options.modes));
    const double runtime = seconds_since(start);
    std::ostringstream csv;
    csv << "alpha_sq,mu,mu_closed,abs_diff,mu_finite_k,extrapolation_error\n";
    double worst = 0.0;
    std::vector<double> mus;
    for (const auto& r : sweep.rows) {
        if (!r.error.empty()) {
            continue;
        }
        const double diff = std::abs(r.mu - *r.mu_closed);
        worst = std::max(worst, diff);
        mus.push_back(r.mu);
        csv << fmt(*r.parameter) << ',' << fmt(r.mu) << ',' << fmt(*r.mu_closed) << ',' << fmt(diff) << ','
            << fmt(*r.mu_finite_k) << ',' << fmt(r.extrapolation_error) << '\n';
    }
    const auto err = row_error(sweep);
    out.passed = err.empty() && worst < kPipelineTol && strictly_increasing(mus) && runtime < kRuntimeBudget;
    out.summary = err.empty() ? "max |dmu| = " + short_double(worst) + " (< 1e-3) at K=" + std::to_string(options.modes) +
                                    ", runtime " + short_double(runtime) + " s"
                              : "point failed: " + err;
    out.notes.push_back("mu is K-extrapolated from nested partial sums of one K-mode table; raw finite-K values are "
                        "in mu_finite_k");
    out.notes.push_back(kLimitNote);
    out.csv = csv.str();
    return out;
}

AcceptanceResult eq9(const AcceptanceOptions& options) {
    auto out = started(3, "eq9", "disturbance fidelity 1/sqrt(1+2/|a|^2)");
    const auto table = cached_overlap_table(options.modes);
    const auto sums = extrapolated_overlap_sums(table);
    std::ostringstream csv;
    csv << "check,alpha_sq,fidelity,fidelity_closed,abs_diff,mu\n";
    double worst = 0.0;
    std::vector<double> fs;
    for (double a2 : {0.5, 2.0, 8.0}) {
        const auto state = make_state(StateDescriptor::coherent(std::sqrt(a2)));
        const double f = disturbance_fidelity(state, sums);
        const double fc = fidelity_closed_form(a2);
        worst = std::max(worst, std::abs(f - fc));
        fs.push_back(f);
        csv << "closed_form," << fmt(a2) << ',' << fmt(f) << ',' << fmt(fc) << ',' << fmt(std::abs(f - fc)) << ",\n";
    }
    // Duality: back-action drops while extracted entanglement grows.
    std::vector<double> dual_f, dual_mu;
    for (double a2 : {1.0, 2.0, 4.0, 8.0, 16.0}) {
        const auto state = make_state(StateDescriptor::coherent(std::sqrt(a2)));
        const auto moments = moments_from_sums(state, sums);
        dual_f.push_back(disturbance_fidelity(state, sums));
        dual_mu.push_back(negativity(to_bipartite(block_from_moments(moments, 0.01, ProbeParams{}))));
        csv << "duality," << fmt(a2) << ',' << fmt(dual_f.back()) << ",,," << fmt(dual_mu.back()) << '\n';
    }
    const bool increasing = strictly_increasing(fs);
    const bool duality = strictly_increasing(dual_f) && strictly_increasing(dual_mu);
    out.passed = worst < kPipelineTol && increasing && duality;
    out.summary = "max |dF| = " + short_double(worst) + " (< 1e-3); F increasing: " + (increasing ? "yes" : "no") +
                  "; F and mu jointly increasing over |a|^2 = 1..16: " + (duality ? "yes" : "no");
    out.notes.push_back(kLimitNote);
    out.csv = csv.str();
    return out;
}

AcceptanceResult eq10(const AcceptanceOptions& options) {
    auto out = started(2, "eq10", "number-state negativity 1/2 (N-1)/(N+1)");
    std::vector<double> ns;
    for (int n = 1; n <= 10; ++n) {
        ns.push_back(n);
    }
    const auto sweep = run_sweep(pipeline_config(StateKind::Number, ns, options.modes));
    std::ostringstream csv;
    csv << "N,mu,mu_closed,abs_diff,mu_finite_k\n";
    double worst = 0.0, mu1 = 1.0;
    for (const auto& r : sweep.rows) {
        if (!r.error.empty()) {
            continue;
        }
        const double diff = std::abs(r.mu - *r.mu_closed);
        worst = std::max(worst, diff);
        if (*r.parameter == 1.0) {
            mu1 = r.mu;
        }
        csv << fmt(*r.parameter) << ',' << fmt(r.mu) << ',' << fmt(*r.mu_closed) << ',' << fmt(diff) << ','
            << fmt(*r.mu_finite_k) << '\n';
    }
    const auto err = row_error(sweep);
    out.passed = err.empty() && worst < kPipelineTol && mu1 < 1e-6;
    out.summary = err.empty() ? "max |dmu| = " + short_double(worst) + " (< 1e-3); mu(N=1) = " + short_double(mu1) +
                                    " (< 1e-6)"
                              : "point failed: " + err;
    out.csv = csv.str();
    return out;
}

struct OracleCase {
    std::string label;
    TrapState state;
};

std::vector<OracleCase> oracle_states() {
    constexpr int cut = 4;
    std::vector<OracleCase> cases;
    for (int n = 0; n <= cut; ++n) {
        cases.push_back({"number_" + std::to_string(n), make_state(StateDescriptor::fock(n), cut)});
    }
    for (complex a : {complex(0.5, 0.0), complex(0.7, 0.4), complex(-0.3, 0.9)}) {
        const auto d = StateDescriptor::coherent(a);
        cases.push_back({"coherent_" + fmt(a.real()) + "_" + fmt(a.imag()),
                         TrapState(d, {PureComponent{1.0, coherent_coefficients(a, cut)}}, 0.0)});
    }
    const std::vector<std::vector<complex>> supers{
        {{0.6, 0.0}, {0.0, 0.8}},
        {{0.5, 0.0}, {0.0, 0.0}, {0.5, 0.5}, {0.0, 0.0}, {0.5, 0.0}},
        {{0.0, 0.0}, {0.3, -0.2}, {0.7, 0.1}, {-0.4, 0.0}, {0.2, 0.3}},
    };
    for (std::size_t i = 0; i < supers.size(); ++i) {
        cases.push_back({"superposition_" + std::to_string(i), make_state(StateDescriptor::superposition(supers[i]), cut)});
    }
    // Truncated mixtures: the comparison only needs both paths to see the same state.
    std::vector<double> thermal(cut + 1), phase(cut + 1);
    const double nbar = 0.8, a2 = 1.3;
    double fact = 1.0;
    for (int n = 0; n <= cut; ++n) {
        thermal[n] = std::pow(nbar, n) / std::pow(nbar + 1.0, n + 1);
        fact *= n > 0 ? n : 1;
        phase[n] = std::exp(-a2) * std::pow(a2, n) / fact;
    }
    cases.push_back({"thermal_0.8", TrapState::number_mixture(StateDescriptor::thermal(nbar), thermal, 0.0)});
    cases.push_back({"phase_averaged_1.3", TrapState::number_mixture(StateDescriptor::phase_averaged(a2), phase, 0.0)});
    return cases;
}

AcceptanceResult oracle(const AcceptanceOptions&) {
    auto out = started(4, "oracle", "moments path equals explicit Fock path");
    const auto start = Clock::now();
    std::ostringstream csv;
    csv << "K,state,m_ll,m_rr,m_lr_re,m_lr_im,diff_ll,diff_rr,diff_lr\n";
    double worst = 0.0;
    int instances = 0;
    const auto cases = oracle_states();
    for (int k : {2, 4, 6}) {
        const auto table = build_overlap_table(k);
        for (const auto& c : cases) {
            const auto a = moments_from_state(c.state, table);
            const auto b = moments_from_fock(c.state, table);
            const double dll = std::abs(a.m_ll - b.m_ll);
            const double drr = std::abs(a.m_rr - b.m_rr);
            const double dlr = std::abs(a.m_lr - b.m_lr);
            worst = std::max({worst, dll, drr, dlr});
            ++instances;
            csv << k << ',' << c.label << ',' << fmt(a.m_ll) << ',' << fmt(a.m_rr) << ',' << fmt(a.m_lr.real()) << ','
                << fmt(a.m_lr.imag()) << ',' << fmt(dll) << ',' << fmt(drr) << ',' << fmt(dlr) << '\n';
        }
    }
    const double runtime = seconds_since(start);
    out.passed = worst < kOracleTol && instances >= 20 && runtime < kRuntimeBudget;
    out.summary = std::to_string(instances) + " instances (K <= 6, n_cut <= 4), max |dm| = " + short_double(worst) +
                  " (< 1e-12), runtime " + short_double(runtime) + " s";
    out.csv = csv.str();
    return out;
}

AcceptanceResult perturbation(const AcceptanceOptions&) {
    auto out = started(5, "perturbation", "exact vs first-order residual is quadratic in g; leakage < 1% of p_succ");
    const ValidationOptions vo;
    const auto report = residual_ladder_report(vo);
    std::ostringstream csv;
    csv << "pulse_area,duration,residual,ratio,p_succ,leakage_fraction\n";
    bool ratios_ok = true;
    for (const auto& r : report.ladder) {
        csv << fmt(r.area) << ',' << fmt(r.duration) << ',' << fmt(r.residual) << ','
            << (r.ratio > 0.0 ? fmt(r.ratio) : std::string{}) << ',' << fmt(r.p_succ) << ','
            << fmt(r.leakage_fraction) << '\n';
        if (r.ratio > 0.0 && !(r.ratio >= 3.0 && r.ratio <= 5.0)) {
            ratios_ok = false;
        }
    }
    const double leak = report.default_leakage_fraction;
    out.passed = ratios_ok && report.ladder.size() >= 3 && leak < 0.01;
    std::string ratios;
    for (const auto& r : report.ladder) {
        if (r.ratio > 0.0) {
            ratios += (ratios.empty() ? "" : ", ") + short_double(r.ratio);
        }
    }
    out.summary = "residual ratios per halving {" + ratios + "} (in [3,5]), fitted exponent " +
                  short_double(report.residual_fit.exponent) + "; leakage/p_succ = " + short_double(leak) +
                  " (< 0.01)";
    out.notes.push_back("K=" + std::to_string(vo.ladder_modes) + ", n_max=" + std::to_string(vo.ladder_max_particles) +
                        ", |N=" + std::to_string(vo.ladder_number) + ">, " + std::to_string(vo.ladder_levels) +
                        " probe levels, H0 on, g and T halved together at fixed amplitude");
    out.csv = csv.str();
    return out;
}

AcceptanceResult commutator(const AcceptanceOptions&) {
    auto out = started(6, "commutator", "locality residual shrinks with K");
    const ValidationOptions vo;
    const auto rows = commutator_table(vo);
    std::ostringstream csv;
    csv << "K,product_residual,literal_commutator\n";
    bool band = true;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        csv << rows[i].modes << ',' << fmt(rows[i].product) << ',' << fmt(rows[i].commutator) << '\n';
        if (i > 0 && !(rows[i].product < 2.0 * rows[i - 1].product)) {
            band = false;
        }
    }
    const auto& first = rows.front();
    const auto& last = rows.back();
    out.passed = last.product < first.product && band && last.product > 0.0;
    out.summary = "max |(Lambda_L Lambda_R)_kl| on the first " + std::to_string(vo.commutator_block) +
                  " modes: K=" + std::to_string(first.modes) + " " + short_double(first.product) + " -> K=" +
                  std::to_string(last.modes) + " " + short_double(last.product) + " (decreasing, nonzero)";
    out.notes.push_back("[Lambda_L, Lambda_R] vanishes identically at every K (Lambda_L + Lambda_R = N commutes "
                        "with both), so the residual tracked is the product Lambda_L Lambda_R, which is zero only "
                        "for exactly local projectors; it is never asserted to be zero");
    out.csv = csv.str();
    return out;
}

AcceptanceResult structural(const AcceptanceOptions& options) {
    auto out = started(7, "structural", "partial-transpose negativity equals |m_LR|/S");
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::ostringstream csv;
    csv << "index,m_ll,m_rr,m_lr_re,m_lr_im,negativity,structural,abs_diff\n";
    double worst = 0.0;
    constexpr int count = 200;
    for (int i = 0; i < count; ++i) {
        ProbeBlockMoments m;
        m.m_ll = std::exp(8.0 * unit(rng) - 4.0);
        m.m_rr = std::exp(8.0 * unit(rng) - 4.0);
        const double radius = unit(rng) * std::sqrt(m.m_ll * m.m_rr);
        m.m_lr = std::polar(radius, 2.0 * M_PI * unit(rng));
        m.s = m.m_ll + m.m_rr;
        const double generic = negativity(to_bipartite(block_from_moments(m, 0.01, ProbeParams{})));
        const double structural = m.structural_negativity();
        const double diff = std::abs(generic - structural);
        worst = std::max(worst, diff);
        csv << i << ',' << fmt(m.m_ll) << ',' << fmt(m.m_rr) << ',' << fmt(m.m_lr.real()) << ',' << fmt(m.m_lr.imag())
            << ',' << fmt(generic) << ',' << fmt(structural) << ',' << fmt(diff) << '\n';
    }
    out.passed = worst < kStructuralTol;
    out.summary = std::to_string(count) + " random blocks (seed " + std::to_string(options.seed) +
                  "), max |difference| = " + short_double(worst) + " (< 1e-12)";
    out.csv = csv.str();
    return out;
}

AcceptanceResult mixtures(const AcceptanceOptions& options) {
    auto out = started(8, "mixtures", "phase-averaged coherent and thermal negativities");
    std::ostringstream csv;
    csv << "state,parameter,mu,mu_reference,reference_source,abs_diff\n";
    // Phase averaging keeps the number distribution, so the comparison is against
    // the coherent state run through the same analytic-limit pipeline.
    constexpr double tight_tail = 1e-15;
    double worst_phase = 0.0, worst_phase_closed = 0.0;
    auto limit_mu = [](const TrapState& state) {
        return negativity(to_bipartite(
            block_from_moments(analytic_limit_moments(state), 0.01, ProbeParams{}, number_moments(state).total)));
    };
    for (double a2 : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        const double mu = limit_mu(make_state(StateDescriptor::phase_averaged(a2), 4096, tight_tail));
        const double coherent = limit_mu(make_state(StateDescriptor::coherent(std::sqrt(a2)), 4096, tight_tail));
        const double closed = negativity_closed_form(StateKind::Coherent, a2);
        worst_phase = std::max(worst_phase, std::abs(mu - coherent));
        worst_phase_closed = std::max(worst_phase_closed, std::abs(mu - closed));
        csv << "phase_averaged," << fmt(a2) << ',' << fmt(mu) << ',' << fmt(coherent) << ",coherent_pipeline,"
            << fmt(std::abs(mu - coherent)) << '\n';
        csv << "phase_averaged," << fmt(a2) << ',' << fmt(mu) << ',' << fmt(closed) << ",coherent_closed_form,"
            << fmt(std::abs(mu - closed)) << '\n';
    }
    const auto sweep = run_sweep(pipeline_config(StateKind::Thermal, {0.5, 1.0, 4.0}, options.modes));
    double worst_thermal = 0.0;
    for (const auto& r : sweep.rows) {
        if (!r.error.empty()) {
            continue;
        }
        const double diff = std::abs(r.mu - *r.mu_closed);
        worst_thermal = std::max(worst_thermal, diff);
        csv << "thermal," << fmt(*r.parameter) << ',' << fmt(r.mu) << ',' << fmt(*r.mu_closed) << ",derived,"
            << fmt(diff) << '\n';
    }
    const auto err = row_error(sweep);
    out.passed = err.empty() && worst_phase < 1e-12 && worst_phase_closed < 1e-12 && worst_thermal < kPipelineTol;
    out.summary = err.empty() ? "phase-averaged vs coherent (analytic limit) max |dmu| = " + short_double(worst_phase) +
                                    " (< 1e-12), vs closed form " + short_double(worst_phase_closed) + "; thermal vs nbar/(2(nbar+1)) at K=" + std::to_string(options.modes) +
                                    " max |dmu| = " + short_double(worst_thermal) + " (< 1e-3)"
                              : "point failed: " + err;
    out.notes.push_back("reference forms labelled DERIVED: phase averaging keeps the Poisson weights, and the thermal "
                        "form follows from geometric factorial moments; neither is a published value");
    out.csv = csv.str();
    return out;
}

using TargetFn = std::function<AcceptanceResult(const AcceptanceOptions&)>;

const std::map<std::string, TargetFn>& evidence_targets() {
    static const std::map<std::string, TargetFn> targets{
        {"eq8", eq8},           {"eq10", eq10},         {"eq9", eq9},
        {"oracle", oracle},     {"perturbation", perturbation},
        {"commutator", commutator}, {"structural", structural}, {"mixtures", mixtures},
    };
    return targets;
}

// Everything the other targets write, plus a threaded sweep and a sampling
// run, produced twice and compared byte for byte.
std::string determinism_payload(const AcceptanceOptions& options, int workers) {
    std::ostringstream all;
    for (const auto& name : acceptance_targets()) {
        if (name == "determinism") {
            continue;
        }
        all << "## " << name << '\n' << evidence_targets().at(name)(options).csv;
    }
    auto config = pipeline_config(StateKind::Coherent, {0.25, 0.5, 1, 2, 3, 4, 6, 8}, options.modes);
    config.workers = workers;
    write_sweep_csv(run_sweep(config), all);
    const auto counts = sample_outcomes(0.3, 10000, options.seed);
    all << "shots,successes\n10000," << counts.successes << '\n';
    return all.str();
}

AcceptanceResult determinism(const AcceptanceOptions& options) {
    auto out = started(9, "determinism", "repeated runs give byte-identical CSVs");
    const auto first = determinism_payload(options, 1);
    const auto second = determinism_payload(options, 4);
    out.passed = first == second;
    out.summary = out.passed ? "two runs (1 and 4 sweep workers) produced identical output (" +
                                   std::to_string(first.size()) + " bytes)"
                             : "outputs differ between runs";
    out.notes.push_back("cross-process determinism is checked separately by running the CLI twice and diffing");
    std::ostringstream csv;
    csv << "run,bytes,hash\n";
    csv << "1," << first.size() << ',' << std::hash<std::string>{}(first) << '\n';
    csv << "2," << second.size() << ',' << std::hash<std::string>{}(second) << '\n';
    out.csv = csv.str();
    return out;
}

}  // namespace

const std::vector<std::string>& acceptance_targets() {
    static const std::vector<std::string> names{"eq8",        "eq10",       "eq9",      "oracle",     "perturbation",
                                                "commutator", "structural", "mixtures", "determinism"};
    return names;
}

AcceptanceResult run_acceptance_target(const std::string& target, const AcceptanceOptions& options) {
    std::string name = target;
    if (name.rfind("accept:", 0) == 0) {
        name = name.substr(7);
    }
    const auto start = Clock::now();
    AcceptanceResult result;
    if (name == "determinism") {
        result = determinism(options);
    } else {
        const auto& targets = evidence_targets();
        const auto it = targets.find(name);
        if (it == targets.end()) {
            throw ConfigError("unknown acceptance target '" + target + "'");
        }
        try {
            result = it->second(options);
        } catch (const NumericalError& e) {
            result.target = name;
            result.passed = false;
            result.summary = std::string("numerical failure: ") + e.what();
        }
    }
    result.seconds = seconds_since(start);
    if (options.output_dir) {
        std::filesystem::create_directories(*options.output_dir);
        std::ofstream file(*options.output_dir / ("accept_" + name + ".csv"), std::ios::binary);
        if (!file) {
            throw ConfigError("cannot write into " + options.output_dir->string());
        }
        file << result.csv;
    }
    return result;
}

std::vector<AcceptanceResult> run_acceptance(const std::string& target, const AcceptanceOptions& options) {
    if (target == "all" || target == "accept:all") {
        std::vector<AcceptanceResult> results;
        for (const auto& name : acceptance_targets()) {
            results.push_back(run_acceptance_target(name, options));
        }
        return results;
    }
    return {run_acceptance_target(target, options)};
}

std::string format_result_line(const AcceptanceResult& result) {
    std::string line = std::string(result.passed ? "[PASS] " : "[FAIL] ") + std::to_string(result.criterion) + " " +
                       result.target + " " + result.title + ": " + result.summary;
    for (const auto& note : result.notes) {
        line += "\n       note: " + note;
    }
    return line;
}

}  // namespace eprx
