#pragma once

#include <stdexcept>
#include <string>

namespace csde {

struct InvalidInputError : std::runtime_error {
    explicit InvalidInputError(const std::string& msg) : std::runtime_error(msg) {}
};

// Thrown by log_map when the target is too close to the cut locus.
struct CutLocusError : std::runtime_error {
    CutLocusError(const std::string& msg, double dist)
        : std::runtime_error(msg), distance(dist) {}
    double distance;
};

struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg, long step = -1)
        : std::runtime_error(msg), step(step) {}
    long step;
};

struct OutOfRangeError : std::runtime_error {
    explicit OutOfRangeError(const std::string& msg) : std::runtime_error(msg) {}
};

struct UnsupportedError : std::runtime_error {
    explicit UnsupportedError(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace csde
