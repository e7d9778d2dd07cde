#pragma once

#include <stdexcept>
#include <string>

namespace lloqss {

// Config file / key / value problems. CLI exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A solver was asked for a positive-rate operating point that does not exist
// (e.g. the rate is already negative at the shortest distance). CLI exit code 3.
struct NoPositiveRateError : std::runtime_error {
    explicit NoPositiveRateError(const std::string& what) : std::runtime_error(what) {}
};

// A numeric expression left its valid domain beyond the tolerated rounding
// band (eigenvalue radicand below -1e-9 and similar). CLI exit code 4.
struct NumericalDomainError : std::runtime_error {
    explicit NumericalDomainError(const std::string& what) : std::runtime_error(what) {}
};

// Statistical estimator fed data it cannot invert (zero variance and similar).
struct DegenerateDataError : std::runtime_error {
    explicit DegenerateDataError(const std::string& what) : std::runtime_error(what) {}
};

// Phase estimator saw correlations indistinguishable from zero in both
// quadratures; the angle is undefined.
struct IndeterminateAngleError : std::runtime_error {
    explicit IndeterminateAngleError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace lloqss
