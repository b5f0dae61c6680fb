#include "eprx/config.hpp"

#include "eprx/errors.hpp"
#include "eprx/fock.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace eprx {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
        return s.substr(1, s.size() - 2);
    }
    return s;
}

double parse_double(const std::string& key, const std::string& text) {
    const auto t = trim(text);
    double v = 0.0;
    const auto* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(t.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        throw ConfigError("config key '" + key + "': expected a number, got '" + text + "'");
    }
    return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, sep)) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

const std::set<std::string>& known_keys() {
    static const std::set<std::string> keys{
        "state", "alpha_sq", "N", "nbar", "coeffs", "values", "modes", "K", "fock.n_max", "state.max_cut",
        "path", "extrapolate", "trap.m", "trap.omega", "probe.M", "probe.Omega", "probe.levels", "regime",
        "regime.amplitude", "regime.reference", "pulse.shape", "pulse.area", "pulse.T", "pulse.amplitude", "pulse.samples",
        "include_H0", "exact.dim_cap", "seed", "output", "output.plot", "output.timing", "workers",
        "tol.quadrature", "tol.tail", "tol.convergence"};
    return keys;
}

}  // namespace

KeyValueConfig KeyValueConfig::parse(const std::string& text) {
    KeyValueConfig cfg;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // '#' inside quotes is kept.
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') {
                quoted = !quoted;
            } else if (line[i] == '#' && !quoted) {
                line.erase(i);
                break;
            }
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        }
        auto key = trim(line.substr(0, eq));
        if (key.empty()) {
            throw ConfigError("line " + std::to_string(lineno) + ": empty key");
        }
        if (!section.empty()) {
            key = section + "." + key;
        }
        cfg.set(key, unquote(trim(line.substr(eq + 1))));
    }
    return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read config file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

void KeyValueConfig::set(const std::string& key, const std::string& value) {
    entries_[key] = value;
}

void KeyValueConfig::set_assignment(const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) {
        throw ConfigError("override '" + assignment + "' must look like key=value");
    }
    set(trim(assignment.substr(0, eq)), unquote(trim(assignment.substr(eq + 1))));
}

bool KeyValueConfig::has(const std::string& key) const {
    return entries_.count(key) != 0;
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? fallback : it->second;
}

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? fallback : parse_double(key, it->second);
}

int KeyValueConfig::get_int(const std::string& key, int fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) {
        return fallback;
    }
    const double v = parse_double(key, it->second);
    if (v != std::floor(v) || std::abs(v) > 2e9) {
        throw ConfigError("config key '" + key + "': expected an integer, got '" + it->second + "'");
    }
    return static_cast<int>(v);
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
    auto it = entries_.find(key);
    if (it == entries_.end()) {
        return fallback;
    }
    std::string v = it->second;
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("config key '" + key + "': expected true/false, got '" + it->second + "'");
}

std::vector<double> KeyValueConfig::get_doubles(const std::string& key) const {
    std::vector<double> out;
    auto it = entries_.find(key);
    if (it == entries_.end()) {
        return out;
    }
    for (const auto& item : split(it->second, ',')) {
        out.push_back(parse_double(key, item));
    }
    return out;
}

std::string to_string(ComputePath path) {
    switch (path) {
        case ComputePath::Analytic: return "analytic";
        case ComputePath::Moments: return "moments";
        case ComputePath::Fock: return "fock";
        case ComputePath::Exact: return "exact";
    }
    return "unknown";
}

std::string to_string(PulseRegime regime) {
    switch (regime) {
        case PulseRegime::Amplitude: return "amplitude";
        case PulseRegime::QuarticScaling: return "quartic";
        case PulseRegime::Fixed: return "fixed";
    }
    return "unknown";
}

bool ExperimentConfig::use_extrapolation() const {
    switch (extrapolate) {
        case KExtrapolation::Richardson: return true;
        case KExtrapolation::None: return false;
        case KExtrapolation::Auto: return modes >= 128 && modes % 16 == 0;
    }
    return false;
}

QuadratureOptions ExperimentConfig::quadrature() const {
    QuadratureOptions q;
    q.tolerance = tol.quadrature;
    return q;
}

StateDescriptor ExperimentConfig::descriptor(double value) const {
    switch (kind) {
        case StateKind::Coherent: return StateDescriptor::coherent(complex{std::sqrt(value), 0.0});
        case StateKind::Number: return StateDescriptor::fock(static_cast<int>(std::lround(value)));
        case StateKind::Thermal: return StateDescriptor::thermal(value);
        case StateKind::PhaseAveraged: return StateDescriptor::phase_averaged(value);
        case StateKind::Superposition: return StateDescriptor::superposition(coefficients);
        case StateKind::Mixture: break;
    }
    throw ConfigError("state kind cannot be swept");
}

void ExperimentConfig::validate() const {
    if (kind == StateKind::Superposition) {
        if (coefficients.empty()) {
            throw ConfigError("coeffs: superposition needs a non-empty coefficient list");
        }
    } else if (values.empty()) {
        throw ConfigError("values: sweep list is empty");
    }
    for (double v : values) {
        if (!(v >= 0.0) || !std::isfinite(v)) {
            throw ConfigError("values: sweep parameters must be finite and non-negative");
        }
        if (kind == StateKind::Number && v != std::floor(v)) {
            throw ConfigError("N: number-state sweep needs integers");
        }
    }
    if (modes < 1) {
        throw ConfigError("modes: K must be >= 1");
    }
    if (max_particles < 0) {
        throw ConfigError("fock.n_max: must be >= 0");
    }
    if (max_cutoff < 1) {
        throw ConfigError("state.max_cut: must be >= 1");
    }
    if (!(tol.quadrature > 0.0)) throw ConfigError("tol.quadrature: must be > 0");
    if (!(tol.tail > 0.0)) throw ConfigError("tol.tail: must be > 0");
    if (!(tol.convergence > 0.0)) throw ConfigError("tol.convergence: must be > 0");
    if (!(regime_amplitude > 0.0)) throw ConfigError("regime.amplitude: must be > 0");
    if (!(quartic_reference > 0.0)) throw ConfigError("regime.reference: must be > 0");
    if (!(pulse_duration >= 0.0)) throw ConfigError("pulse.T: must be >= 0");
    if (!(pulse_amplitude > 0.0)) throw ConfigError("pulse.amplitude: must be > 0");
    if (pulse_shape != "square" && pulse_shape != "sampled") {
        throw ConfigError("pulse.shape: expected square or sampled");
    }
    if (pulse_shape == "sampled" && pulse_samples.size() < 2) {
        throw ConfigError("pulse.samples: a sampled pulse needs at least two samples");
    }
    if (pulse_shape == "sampled" && !(pulse_duration > 0.0)) {
        throw ConfigError("pulse.T: a sampled pulse needs an explicit duration > 0");
    }
    if (pulse_shape == "sampled" && regime != PulseRegime::Fixed) {
        throw ConfigError("pulse.shape: sampled pulses need regime = fixed");
    }
    if (workers < 0) throw ConfigError("workers: must be >= 0");
    try {
        trap.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("trap: ") + e.what());
    }
    try {
        probes.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("probe: ") + e.what());
    }
    if (path == ComputePath::Moments && extrapolate == KExtrapolation::Richardson &&
        (modes < 128 || modes % 16 != 0)) {
        throw ConfigError("extrapolate: Richardson extrapolation needs K >= 128 and K % 16 == 0");
    }
    if (path == ComputePath::Fock || path == ComputePath::Exact) {
        const auto dim = FockBasis::expected_dimension(modes, max_particles);
        const auto levels = static_cast<std::size_t>(probes.levels);
        const auto joint = path == ComputePath::Exact ? dim * levels * levels : dim;
        if (joint > dim_cap) {
            throw ConfigError("exact.dim_cap: " + to_string(path) + " path dimension " + std::to_string(joint) +
                              " exceeds the cap " + std::to_string(dim_cap));
        }
    }
}

ExperimentConfig experiment_from(const KeyValueConfig& kv) {
    for (const auto& [key, value] : kv.entries()) {
        if (known_keys().count(key) == 0) {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    ExperimentConfig c;
    c.kind = parse_state_kind(kv.get_string("state", "coherent"));
    const char* value_key = "values";
    switch (c.kind) {
        case StateKind::Coherent:
        case StateKind::PhaseAveraged: value_key = "alpha_sq"; break;
        case StateKind::Number: value_key = "N"; break;
        case StateKind::Thermal: value_key = "nbar"; break;
        default: break;
    }
    c.values = kv.has(value_key) ? kv.get_doubles(value_key) : kv.get_doubles("values");
    if (kv.has("coeffs")) {
        for (const auto& item : split(kv.get_string("coeffs", ""), ',')) {
            const auto parts = split(item, ':');
            if (parts.empty() || parts.size() > 2) {
                throw ConfigError("coeffs: expected re or re:im entries, got '" + item + "'");
            }
            const double re = parse_double("coeffs", parts[0]);
            const double im = parts.size() == 2 ? parse_double("coeffs", parts[1]) : 0.0;
            c.coefficients.emplace_back(re, im);
        }
    }
    c.modes = kv.get_int("modes", kv.get_int("K", c.modes));
    c.max_particles = kv.get_int("fock.n_max", c.max_particles);
    c.max_cutoff = kv.get_int("state.max_cut", c.max_cutoff);

    const auto path = kv.get_string("path", "moments");
    if (path == "analytic") c.path = ComputePath::Analytic;
    else if (path == "moments") c.path = ComputePath::Moments;
    else if (path == "fock") c.path = ComputePath::Fock;
    else if (path == "exact") c.path = ComputePath::Exact;
    else throw ConfigError("path: expected analytic, moments, fock or exact, got '" + path + "'");

    const auto ex = kv.get_string("extrapolate", "auto");
    if (ex == "auto") c.extrapolate = KExtrapolation::Auto;
    else if (ex == "richardson") c.extrapolate = KExtrapolation::Richardson;
    else if (ex == "none") c.extrapolate = KExtrapolation::None;
    else throw ConfigError("extrapolate: expected auto, richardson or none, got '" + ex + "'");

    c.trap.mass = kv.get_double("trap.m", c.trap.mass);
    c.trap.omega = kv.get_double("trap.omega", c.trap.omega);
    c.probes.mass = kv.get_double("probe.M", c.probes.mass);
    c.probes.omega = kv.get_double("probe.Omega", c.probes.omega);
    c.probes.levels = kv.get_int("probe.levels", c.path == ComputePath::Exact ? 4 : 2);

    const auto regime = kv.get_string("regime", kv.has("pulse.area") ? "fixed" : "amplitude");
    if (regime == "amplitude") c.regime = PulseRegime::Amplitude;
    else if (regime == "quartic") c.regime = PulseRegime::QuarticScaling;
    else if (regime == "fixed") c.regime = PulseRegime::Fixed;
    else throw ConfigError("regime: expected amplitude, quartic or fixed, got '" + regime + "'");
    c.regime_amplitude = kv.get_double("regime.amplitude", c.regime_amplitude);
    c.quartic_reference = kv.get_double("regime.reference", c.quartic_reference);
    c.pulse_area = kv.get_double("pulse.area", c.pulse_area);
    c.pulse_duration = kv.get_double("pulse.T", c.pulse_duration);
    c.pulse_amplitude = kv.get_double("pulse.amplitude", c.pulse_amplitude);
    c.pulse_shape = kv.get_string("pulse.shape", c.pulse_shape);
    c.pulse_samples = kv.get_doubles("pulse.samples");

    c.include_h0 = kv.get_bool("include_H0", c.path == ComputePath::Exact);
    const int cap = kv.get_int("exact.dim_cap", static_cast<int>(c.dim_cap));
    if (cap < 1) {
        throw ConfigError("exact.dim_cap: must be >= 1");
    }
    c.dim_cap = static_cast<std::size_t>(cap);
    const double seed = kv.get_double("seed", 1.0);
    if (seed < 0.0 || seed != std::floor(seed)) {
        throw ConfigError("seed: expected a non-negative integer");
    }
    c.seed = static_cast<std::uint64_t>(seed);
    c.output = kv.get_string("output", c.output.string());
    c.plot_data = kv.get_bool("output.plot", c.plot_data);
    c.timing = kv.get_bool("output.timing", c.timing);
    c.workers = kv.get_int("workers", c.workers);
    c.tol.quadrature = kv.get_double("tol.quadrature", c.tol.quadrature);
    c.tol.tail = kv.get_double("tol.tail", c.tol.tail);
    c.tol.convergence = kv.get_double("tol.convergence", c.tol.convergence);
    return c;
}

}  // namespace eprx
