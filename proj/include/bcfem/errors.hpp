#pragma once

#include <stdexcept>
#include <string>

namespace bcfem {

// Invalid user-facing configuration (bad family/stage combo, infeasible bounds, ...).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside the mathematical domain of an operation.
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Repeated interpolation nodes.
struct DegenerateInterpolationError : std::runtime_error {
    explicit DegenerateInterpolationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Zero pivot in LU factorization.
struct SingularMatrixError : std::runtime_error {
    explicit SingularMatrixError(const std::string& msg) : std::runtime_error(msg) {}
};

// Evaluation of the logarithmic potential at |c| >= 1; signals a
// bounds-enforcement failure upstream.
struct SingularityError : std::runtime_error {
    explicit SingularityError(const std::string& msg) : std::runtime_error(msg) {}
};

// File I/O failure, carries the offending path in the message.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace bcfem
