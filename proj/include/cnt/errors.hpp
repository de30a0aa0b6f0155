#pragma once

#include <stdexcept>
#include <string>

namespace cnt {

enum class ErrorCode {
    usage,
    no_return,          // trajectory failed to return to the section in time
    not_entrained,      // iteration/convergence did not lock to the forcing
    non_oscillatory,    // limit cycle search failed to converge
    stiffness,          // step-size underflow in the integrator
    missing_dependency, // an input (e.g. a precomputed cycle) was required
    degenerate_angle,   // point coincides with the angle-frame origin
    no_bifurcation,     // scan endpoints had the same fixed-point count
    invariant_violation,
    io
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}
    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
    throw Error(code, msg);
}

} // namespace cnt
