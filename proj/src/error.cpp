#include "embtopo/error.hpp"

namespace embtopo {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::MalformedHeader: return "MalformedHeader";
        case ErrorKind::UnsupportedDtype: return "UnsupportedDtype";
        case ErrorKind::TruncatedPayload: return "TruncatedPayload";
        case ErrorKind::BadChannelIndex: return "BadChannelIndex";
        case ErrorKind::InvalidGrid: return "InvalidGrid";
        case ErrorKind::SchemaViolation: return "SchemaViolation";
        case ErrorKind::MissingTensorFile: return "MissingTensorFile";
        case ErrorKind::NonMonotoneLayerIndex: return "NonMonotoneLayerIndex";
        case ErrorKind::GridTooLarge: return "GridTooLarge";
        case ErrorKind::ReductionOverflow: return "ReductionOverflow";
        case ErrorKind::OracleTooLarge: return "OracleTooLarge";
        case ErrorKind::EmptyGrid: return "EmptyGrid";
        case ErrorKind::NoValidThreshold: return "NoValidThreshold";
        case ErrorKind::InsufficientLayers: return "InsufficientLayers";
        case ErrorKind::DegenerateFit: return "DegenerateFit";
        case ErrorKind::ZeroVariance: return "ZeroVariance";
        case ErrorKind::LengthMismatch: return "LengthMismatch";
        case ErrorKind::RowNotNormalized: return "RowNotNormalized";
        case ErrorKind::InvalidArgument: return "InvalidArgument";
        case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace embtopo
