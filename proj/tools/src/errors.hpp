#pragma once

#include <stdexcept>
#include <string>

namespace esboot::cli {

/// Error categories reported in the structured error object and mapped to exit codes.
enum class ErrorKind { Usage, Config, Io, Validation, Convergence, Internal };

class CliError : public std::runtime_error {
public:
    CliError(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

const char* error_kind_name(ErrorKind kind) noexcept;
int exit_code(ErrorKind kind) noexcept;

}  // namespace esboot::cli
