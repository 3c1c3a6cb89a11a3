#pragma once

#include <stdexcept>
#include <string>

namespace ditec {

/// Thrown when a caller breaks an operation's precondition.
class ContractViolation : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Thrown for bad or inconsistent input data (corpus, cache, config files).
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool condition, const std::string& message) {
    if (!condition) {
        throw ContractViolation(message);
    }
}

}  // namespace ditec
