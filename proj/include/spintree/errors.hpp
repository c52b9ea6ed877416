#pragma once

#include <stdexcept>
#include <string>

namespace spintree {

// Error taxonomy mirrors the CLI exit codes: input (1), size cap (2),
// unsupported regime (3), numeric failure (4).

struct InputError : std::runtime_error {
    explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

struct TooLargeError : std::runtime_error {
    explicit TooLargeError(const std::string& what) : std::runtime_error(what) {}
};

struct UnsupportedRegimeError : std::runtime_error {
    explicit UnsupportedRegimeError(const std::string& what) : std::runtime_error(what) {}
};

struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

struct DomainError : NumericError {
    explicit DomainError(const std::string& what) : NumericError(what) {}
};

}  // namespace spintree
