#pragma once

#include <stdexcept>
#include <string>

namespace udens {

// Status values mirror the udens_status codes of the public C header.
enum class Status : int {
    ok = 0,
    invalid_argument = 1,
    parse_error = 2,
    range_error = 3,
    lp_failure = 4,
    verify_failure = 5,
    io_error = 6,
    internal_error = 7,
};

class Error : public std::runtime_error {
public:
    Error(Status code, const std::string& what) : std::runtime_error(what), code_(code) {}
    Status code() const noexcept { return code_; }

private:
    Status code_;
};

[[noreturn]] inline void fail(Status code, const std::string& what) { throw Error(code, what); }

} // namespace udens
