#pragma once

#include <stdexcept>
#include <string>

namespace tailrisk {

// Raised when an input file or record cannot be interpreted (bad CSV cell,
// unparseable date, missing column). Distinct from std::invalid_argument,
// which we reserve for programmer-facing contract violations.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when an estimator cannot produce a valid tail index from the data
// it was given (zero spread, non-positive slope, ...). Callers running many
// replications catch this and count a failure instead of aborting.
class EstimatorError : public std::runtime_error {
public:
    explicit EstimatorError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tailrisk
