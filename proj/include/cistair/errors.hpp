#pragma once

#include <stdexcept>
#include <string>

namespace cistair {

enum class ErrorCode {
    InvalidInput = 2,
    Unsupported = 3,
    Invariant = 4,
    Budget = 5,
    Domain = 6,
    NotExact = 7,
    Io = 8,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace cistair
