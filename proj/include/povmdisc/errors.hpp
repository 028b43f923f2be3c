#pragma once

#include <stdexcept>
#include <string>

namespace povmdisc {

// Base class for all domain errors. The CLI maps these to exit code 1.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionError : Error {
    using Error::Error;
};

// Gram matrices of sources and targets disagree, so no isometry can map the
// sources onto the targets.
struct GramMismatchError : Error {
    GramMismatchError(const std::string& what, double deviation)
        : Error(what), max_deviation(deviation) {}
    double max_deviation;
};

struct NotSicError : Error {
    NotSicError(const std::string& what, double deviation)
        : Error(what), worst_deviation(deviation) {}
    double worst_deviation;
};

struct InvalidPermutationError : Error {
    using Error::Error;
};

struct BudgetExceededError : Error {
    using Error::Error;
};

struct PreconditionError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace povmdisc
