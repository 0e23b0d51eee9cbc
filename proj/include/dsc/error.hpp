#pragma once

#include <stdexcept>
#include <string>

namespace dsc {

enum class ErrorCode {
    precondition,       // caller violated a documented precondition
    excluded_point,     // w equals phi(+inf)
    no_zero_free_edge,  // safe_rectangle could not find an admissible edge
    contour_unresolved, // winding quadrature did not settle on an integer
    class_violation,    // symbol does not satisfy its class mapping property
    tail_too_large,     // series truncation tail exceeds the requested tolerance
    config,             // malformed experiment configuration
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline const char* to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::precondition: return "precondition";
    case ErrorCode::excluded_point: return "excluded-point";
    case ErrorCode::no_zero_free_edge: return "no-zero-free-edge";
    case ErrorCode::contour_unresolved: return "contour-unresolved";
    case ErrorCode::class_violation: return "class-violation";
    case ErrorCode::tail_too_large: return "tail-too-large";
    case ErrorCode::config: return "config";
    }
    return "unknown";
}

inline void require(bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorCode::precondition, what);
}

} // namespace dsc
