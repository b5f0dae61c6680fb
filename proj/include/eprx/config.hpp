#pragma once

#include "eprx/evolution.hpp"
#include "eprx/orbitals.hpp"
#include "eprx/states.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace eprx {

/// Flat `key = value` settings. Keys may carry dotted sections
/// (`probe.M`), `[section]` headers prefix following keys, `#` starts a
/// comment, values may be double-quoted.
class KeyValueConfig {
public:
    static KeyValueConfig parse(const std::string& text);
    static KeyValueConfig load(const std::filesystem::path& path);

    void set(const std::string& key, const std::string& value);
    /// Applies `key=value`.
    void set_assignment(const std::string& assignment);
    [[nodiscard]] bool has(const std::string& key) const;
    [[nodiscard]] const std::map<std::string, std::string>& entries() const noexcept { return entries_; }

    [[nodiscard]] std::string get_string(const std::string& key, const std::string& fallback) const;
    [[nodiscard]] double get_double(const std::string& key, double fallback) const;
    [[nodiscard]] int get_int(const std::string& key, int fallback) const;
    [[nodiscard]] bool get_bool(const std::string& key, bool fallback) const;
    [[nodiscard]] std::vector<double> get_doubles(const std::string& key) const;

private:
    std::map<std::string, std::string> entries_;
};

enum class ComputePath { Analytic, Moments, Fock, Exact };
enum class PulseRegime { Amplitude, QuarticScaling, Fixed };
enum class KExtrapolation { Auto, Richardson, None };

[[nodiscard]] std::string to_string(ComputePath path);
[[nodiscard]] std::string to_string(PulseRegime regime);

struct Tolerances {
    double quadrature = 1e-12;
    double tail = 1e-12;
    double convergence = 1e-3;
};

struct ExperimentConfig {
    StateKind kind = StateKind::Coherent;
    std::vector<double> values;           // sweep over |alpha|^2, N or nbar
    std::vector<complex> coefficients;    // superposition
    int modes = 512;
    int max_particles = 4;                // fock / exact paths
    int max_cutoff = 4096;
    ComputePath path = ComputePath::Moments;
    KExtrapolation extrapolate = KExtrapolation::Auto; // moments path
    OscillatorParams trap;
    ProbeParams probes;
    PulseRegime regime = PulseRegime::Amplitude;
    double regime_amplitude = 0.1;
    double quartic_reference = 0.1;
    double pulse_area = 0.01;             // fixed regime
    /// Square pulses: 0 means T = area / pulse_amplitude, keeping T H0 of the
    /// same order as g so the first-order picture stays valid.
    double pulse_duration = 0.0;
    double pulse_amplitude = 1.0;
    std::string pulse_shape = "square";
    std::vector<double> pulse_samples;
    bool include_h0 = false;
    std::size_t dim_cap = 20000;
    std::uint64_t seed = 1;
    std::filesystem::path output = "sweep.csv";
    bool plot_data = true;
    bool timing = false;
    int workers = 0;                      // 0: hardware concurrency
    Tolerances tol;

    /// Field-level checks; throws ConfigError.
    void validate() const;
    [[nodiscard]] QuadratureOptions quadrature() const;
    [[nodiscard]] StateDescriptor descriptor(double value) const;
    /// Auto resolves to Richardson when K >= 128 and K % 16 == 0.
    [[nodiscard]] bool use_extrapolation() const;
};

/// Builds a config from parsed key/values; unknown keys are errors. Call validate() before use.
[[nodiscard]] ExperimentConfig experiment_from(const KeyValueConfig& kv);

}  // namespace eprx
