#pragma once

#include <stdexcept>
#include <string>

namespace plasmon {

// Raised for malformed run configurations (bad keys, bad values, bad files).
// The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when a computation cannot proceed (singular solve, eigensolver
// failure, invalid evaluation point). The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

// A resolvent solve hit an (almost) exact resonance: the shift lambda sits on
// top of a spectrum point. Carries the nearest computed eigenvalue and the
// reciprocal condition estimate of the failed factorization.
class NearResonanceError : public NumericalError {
public:
    NearResonanceError(const std::string& msg, double nearest, double rc)
        : NumericalError(msg), nearest_eigenvalue(nearest), rcond(rc) {}

    double nearest_eigenvalue;
    double rcond;
};

}
