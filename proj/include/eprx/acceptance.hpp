#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace eprx {

struct AcceptanceResult {
    int criterion = 0;
    std::string target;  // eq8, eq9, ...
    std::string title;
    bool passed = false;
    std::string summary;
    std::vector<std::string> notes;
    /// Deterministic evidence table; never contains timings.
    std::string csv;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    int modes = 512;
    std::uint64_t seed = 20240611;
    /// accept_<target>.csv files go here when set.
    std::optional<std::filesystem::path> output_dir;
};

/// Target names in criterion order, without "all".
[[nodiscard]] const std::vector<std::string>& acceptance_targets();

/// One target; throws ConfigError for an unknown name.
[[nodiscard]] AcceptanceResult run_acceptance_target(const std::string& target, const AcceptanceOptions& options = {});

/// `target` may be a single name or "all".
[[nodiscard]] std::vector<AcceptanceResult> run_acceptance(const std::string& target,
                                                           const AcceptanceOptions& options = {});

/// `[PASS] 1 eq8 title: summary` followed by indented notes.
[[nodiscard]] std::string format_result_line(const AcceptanceResult& result);

}  // namespace eprx
