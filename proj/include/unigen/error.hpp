#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace unigen {

// Base for every failure surfaced by the pipeline. `code()` is the stable
// machine-readable name (e.g. "ReplayMiss") used by the CLI and HTTP layer.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

} // namespace unigen
