#pragma once

#include <stdexcept>
#include <string>

namespace zlab {

// Base for every error raised by the library. `module()` names the module
// that raised it so lab runs can attribute failures.
class Error : public std::runtime_error {
public:
    Error(std::string module, const std::string& what)
        : std::runtime_error(module + ": " + what), module_(std::move(module)) {}
    const std::string& module() const { return module_; }

private:
    std::string module_;
};

// Request exceeds a sieve limit, term budget or memory guard.
class CapacityError : public Error { using Error::Error; };
// Argument outside the mathematical domain of the operation.
class DomainError : public Error { using Error::Error; };
// A numerical tolerance or mesh requirement cannot be met.
class ToleranceError : public Error { using Error::Error; };
// Inputs are structurally incomplete (missing scale, empty grid, ...).
class StructuralError : public Error { using Error::Error; };
// Monte Carlo produced too few events to estimate anything.
class InsufficientSample : public Error { using Error::Error; };
// A documented precondition of a window/kernel is violated.
class ContractError : public Error { using Error::Error; };
// Bad CLI or config usage.
class UsageError : public Error { using Error::Error; };

}  // namespace zlab
