#pragma once

#include <stdexcept>
#include <string>

namespace wanderlab {

// Endpoints lie in different grid components; no path exists.
struct unreachable_error : std::runtime_error {
    explicit unreachable_error(const std::string& what) : std::runtime_error(what) {}
};

// A query point sits too close to a curve or critical locus for the
// requested quantity to be numerically meaningful.
struct ill_conditioned_error : std::runtime_error {
    explicit ill_conditioned_error(const std::string& what) : std::runtime_error(what) {}
};

// A geometric precondition of an interpolation setup failed (e.g. a boundary
// curve does not wind once around the origin), invalidating the construction.
struct structural_error : std::runtime_error {
    explicit structural_error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or unknown configuration input; the message names the offending
// key and line so the file can be fixed without reading the source.
struct config_error : std::runtime_error {
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace wanderlab
