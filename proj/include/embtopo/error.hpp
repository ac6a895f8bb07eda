#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace embtopo {

enum class ErrorKind {
    // grid-io
    MalformedHeader,
    UnsupportedDtype,
    TruncatedPayload,
    BadChannelIndex,
    InvalidGrid,
    SchemaViolation,
    MissingTensorFile,
    NonMonotoneLayerIndex,
    // cubical-core / persistence
    GridTooLarge,
    ReductionOverflow,
    OracleTooLarge,
    // topo-metrics
    EmptyGrid,
    NoValidThreshold,
    // ttp-ranking
    InsufficientLayers,
    DegenerateFit,
    ZeroVariance,
    LengthMismatch,
    RowNotNormalized,
    // plumbing
    InvalidArgument,
    Io,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), message_(message) {}

    ErrorKind kind() const noexcept { return kind_; }
    /// The message without the kind prefix, for re-throwing with added context.
    const std::string& message() const noexcept { return message_; }

private:
    ErrorKind kind_;
    std::string message_;
};

}  // namespace embtopo
