#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace eprx {

/// Invalid user input: bad config values, mismatched dimensions, empty sweeps.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A numerical tolerance could not be met (quadrature, tail mass, norm drift,
/// dimension caps).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Short `%g` rendering for error messages (std::to_string prints 1e-12 as 0.000000).
inline std::string short_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace eprx
