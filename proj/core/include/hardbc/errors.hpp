#pragma once

#include <stdexcept>
#include <string>

namespace hbc {

enum class ErrorKind {
    InvalidArgument,
    CornerMismatch,
    UnknownDomain,
    SingularJacobian,
    IncompatibleCornerData,
    CornerSolveSingular,
    NotSupported,
    UnsupportedAssignment,
    NonFiniteResidual,
    MaxIterationsExceeded,
    NumericalFailure,
    ConfigError,
};

const char* to_string(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

}  // namespace hbc
