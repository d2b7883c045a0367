#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dpatch {

/// Invalid user input: bad parameters, malformed config, inconsistent layout.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Query outside the region where a quantity is defined.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A time integration left the admissible state space (NaN or blow-up).
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& what, double time, std::size_t patch)
        : std::runtime_error(what), time_(time), patch_(patch) {}

    double time() const noexcept { return time_; }
    std::size_t patch() const noexcept { return patch_; }

private:
    double time_;
    std::size_t patch_;
};

} // namespace dpatch
