#pragma once

#include <stdexcept>
#include <string>

namespace specmult {

enum class ErrorKind { parameter = 1, domain = 2, shape = 3, unsupported = 4, io = 5, divergence = 6 };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Invalid argument or configuration value.
struct ParameterError : Error {
    explicit ParameterError(const std::string& m) : Error(ErrorKind::parameter, m) {}
};

/// Function evaluated outside where it is finite / defined.
struct DomainError : Error {
    explicit DomainError(const std::string& m) : Error(ErrorKind::domain, m) {}
};

struct ShapeError : Error {
    explicit ShapeError(const std::string& m) : Error(ErrorKind::shape, m) {}
};

struct UnsupportedMode : Error {
    explicit UnsupportedMode(const std::string& m) : Error(ErrorKind::unsupported, m) {}
};

struct IoError : Error {
    explicit IoError(const std::string& m) : Error(ErrorKind::io, m) {}
};

struct DivergenceError : Error {
    explicit DivergenceError(const std::string& m) : Error(ErrorKind::divergence, m) {}
};

}  // namespace specmult
