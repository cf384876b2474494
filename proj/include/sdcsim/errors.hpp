#pragma once

#include <stdexcept>
#include <string>

namespace sdcsim {

/// Coarse error taxonomy used for CLI exit codes and tests.
enum class ErrorKind {
    InvalidArgument,
    FormatError,
    ValidationError,
    EmbeddingInfeasible,
    PlacementInfeasible,
    Conflict,
    NotFound,
    InternalInconsistency,
};

/// Why a virtual link could not be embedded.
enum class InfeasibleReason { Bandwidth, Latency, Disconnected };

class SimError : public std::runtime_error {
public:
    SimError(ErrorKind kind, std::string message)
        : std::runtime_error(std::move(message)), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class InvalidArgumentError : public SimError {
public:
    explicit InvalidArgumentError(std::string message)
        : SimError(ErrorKind::InvalidArgument, std::move(message)) {}
};

/// Malformed input document (syntax or schema). Message names the
/// offending field or byte position.
class FormatError : public SimError {
public:
    explicit FormatError(std::string message)
        : SimError(ErrorKind::FormatError, std::move(message)) {}
};

/// Well-formed input that violates a model invariant. Message names the
/// violated rule.
class ValidationError : public SimError {
public:
    explicit ValidationError(std::string message)
        : SimError(ErrorKind::ValidationError, std::move(message)) {}
};

class EmbeddingInfeasibleError : public SimError {
public:
    EmbeddingInfeasibleError(InfeasibleReason reason, std::string message)
        : SimError(ErrorKind::EmbeddingInfeasible, std::move(message)), reason_(reason) {}

    [[nodiscard]] InfeasibleReason reason() const noexcept { return reason_; }

private:
    InfeasibleReason reason_;
};

class PlacementInfeasibleError : public SimError {
public:
    explicit PlacementInfeasibleError(std::string message)
        : SimError(ErrorKind::PlacementInfeasible, std::move(message)) {}
};

class ConflictError : public SimError {
public:
    explicit ConflictError(std::string message)
        : SimError(ErrorKind::Conflict, std::move(message)) {}
};

class NotFoundError : public SimError {
public:
    explicit NotFoundError(std::string message)
        : SimError(ErrorKind::NotFound, std::move(message)) {}
};

class InternalInconsistencyError : public SimError {
public:
    explicit InternalInconsistencyError(std::string message)
        : SimError(ErrorKind::InternalInconsistency, std::move(message)) {}
};

}  // namespace sdcsim
