#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ulam {

enum class ErrorKind {
    InvalidSpec,
    InvalidInput,
    InvalidLength,
    NonConvergence,
    DegenerateRoots,
    NotUlamStable,
    NotApplicable,
    TolUnreachable,
    MissingForcing,
    TooLarge,
};

constexpr std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::InvalidSpec: return "InvalidSpec";
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::InvalidLength: return "InvalidLength";
    case ErrorKind::NonConvergence: return "NonConvergence";
    case ErrorKind::DegenerateRoots: return "DegenerateRoots";
    case ErrorKind::NotUlamStable: return "NotUlamStable";
    case ErrorKind::NotApplicable: return "NotApplicable";
    case ErrorKind::TolUnreachable: return "TolUnreachable";
    case ErrorKind::MissingForcing: return "MissingForcing";
    case ErrorKind::TooLarge: return "TooLarge";
    }
    return "Unknown";
}

/// Every failure raised by the library carries a machine-readable kind so
/// front ends can map it to exit codes or Python exception types.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message)
        , kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace ulam
