#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace trolllens {

// All recoverable failures carry a stable machine-readable code
// (e.g. "DuplicateId", "UnknownUposTag") plus a human message.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void raise(std::string code, const std::string& message) {
    throw Error(std::move(code), message);
}

} // namespace trolllens
