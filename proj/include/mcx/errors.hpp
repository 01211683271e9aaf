#pragma once

#include <stdexcept>
#include <string>

namespace mcx {

// All module errors carry a stable machine-readable code next to the message,
// so the CLI can map them to JSON error reports.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& msg)
        : std::runtime_error(code + ": " + msg), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

inline Error err(const std::string& code, const std::string& msg) { return Error(code, msg); }

} // namespace mcx
