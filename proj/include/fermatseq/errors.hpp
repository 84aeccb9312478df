#pragma once

#include <stdexcept>
#include <string>

namespace fermatseq {

// Caller passed arguments violating an operation's precondition.
struct parameter_error : std::invalid_argument {
    explicit parameter_error(const std::string& msg) : std::invalid_argument(msg) {}
};

// An internal cross-check failed; indicates an arithmetic bug, never expected.
struct invariant_error : std::logic_error {
    explicit invariant_error(const std::string& msg) : std::logic_error(msg) {}
};

// Input is valid but exceeds a configured size cap.
struct capacity_error : std::runtime_error {
    explicit capacity_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fermatseq
