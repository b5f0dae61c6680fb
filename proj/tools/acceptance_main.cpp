// Runs every acceptance criterion and prints one pass/fail line each.
// Usage: eprx_acceptance [output-dir]

#include "eprx/acceptance.hpp"
#include "eprx/errors.hpp"

#include <iostream>

int main(int argc, char** argv) {
    eprx::AcceptanceOptions options;
    if (argc > 1) {
        options.output_dir = argv[1];
    }
    int failed = 0;
    try {
        for (const auto& name : eprx::acceptance_targets()) {
            const auto result = eprx::run_acceptance_target(name, options);
            std::cout << eprx::format_result_line(result) << std::endl;
            failed += result.passed ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << '\n';
    return failed == 0 ? 0 : 2;
}
