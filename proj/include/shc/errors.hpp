#pragma once

#include <stdexcept>
#include <string>

namespace shc {

// Argument outside an operation's domain.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Iterative method failed to meet its stopping rule.
struct ConvergenceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A numerical contract could not be honoured (tolerance, conditioning, ...).
struct ContractError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace shc
