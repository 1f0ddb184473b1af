#pragma once

#include <stdexcept>
#include <string>

namespace magchain {

enum class ErrorKind {
    InvalidParameter,
    SingularEvaluation,
    ConstraintFailure,
    NonConvergence,
    BoundaryLayerDomain,
    DivergentFunctional,
    NumericalFailure,
    Io,
};

const char* to_string(ErrorKind kind);

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what) {}

    ErrorKind kind() const noexcept { return kind_; }
    /// Message without the kind prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    std::string detail_;
};

class InvalidParameter : public Error {
public:
    explicit InvalidParameter(const std::string& what) : Error(ErrorKind::InvalidParameter, what) {}
};

class SingularEvaluation : public Error {
public:
    explicit SingularEvaluation(const std::string& what) : Error(ErrorKind::SingularEvaluation, what) {}
};

class ConstraintFailure : public Error {
public:
    ConstraintFailure(const std::string& what, double residual)
        : Error(ErrorKind::ConstraintFailure, what + " (residual " + std::to_string(residual) + ")"),
          residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

class BoundaryLayerDomain : public Error {
public:
    explicit BoundaryLayerDomain(const std::string& what) : Error(ErrorKind::BoundaryLayerDomain, what) {}
};

class DivergentFunctional : public Error {
public:
    explicit DivergentFunctional(const std::string& what) : Error(ErrorKind::DivergentFunctional, what) {}
};

class NumericalFailure : public Error {
public:
    NumericalFailure(const std::string& what, double achieved)
        : Error(ErrorKind::NumericalFailure, what + " (achieved " + std::to_string(achieved) + ")"),
          achieved_(achieved) {}
    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

class IoError : public Error {
public:
    IoError(const std::string& what, std::string path)
        : Error(ErrorKind::Io, what + ": " + path), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace magchain
