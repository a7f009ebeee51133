#pragma once

#include <stdexcept>
#include <string>

namespace gfk {

// Walker sits exactly on a Coulomb singularity (electron on nucleus or on
// another electron).
struct SingularityError : std::runtime_error {
    explicit SingularityError(const std::string& what) : std::runtime_error(what) {}
};

// Trial function vanishes at the requested point; drift and local energy
// are undefined there.
struct NodeError : std::runtime_error {
    explicit NodeError(const std::string& what) : std::runtime_error(what) {}
};

// No acceptable step could be proposed within the resampling cap.
struct GuardExhaustedError : std::runtime_error {
    explicit GuardExhaustedError(const std::string& what) : std::runtime_error(what) {}
};

// Nonlinear fit failed to converge within the iteration cap.
struct FitError : std::runtime_error {
    explicit FitError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed run configuration or trial-function parameters.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace gfk
