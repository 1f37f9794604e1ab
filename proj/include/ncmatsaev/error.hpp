#pragma once

#include <stdexcept>
#include <string>

namespace ncm {

/// Failure categories shared by every module. The CLI maps them to exit codes.
enum class ErrorKind {
    input,               // malformed or inconsistent arguments
    invalid_exponent,    // p outside [1, inf]
    undefined_direction, // duality map of the zero element
    routing,             // operation called for an exponent it does not handle
    certification,       // multiplier or symbol fails its positivity requirement
    resource,            // dimension caps exceeded
    accuracy,            // quadrature or iteration did not settle
    window,              // dilation power beyond the truncation window
    precondition,        // structural precondition violated (unit vectors, zero diagonal, ...)
    out_of_scope,        // input outside the hypotheses of the characterization
    axiom,               // a group table violating the group axioms
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, const std::string& what) {
    if (!condition) {
        fail(kind, what);
    }
}

} // namespace ncm
