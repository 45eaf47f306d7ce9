#include "kdq/error.hpp"

namespace kdq {

std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::GaplessMode: return "GaplessMode";
    case ErrorKind::IntegrationFailure: return "IntegrationFailure";
    case ErrorKind::MomentumMismatch: return "MomentumMismatch";
    case ErrorKind::ProjectorError: return "ProjectorError";
    case ErrorKind::BranchTrackingFailure: return "BranchTrackingFailure";
    case ErrorKind::DegeneracyClusteringAmbiguous: return "DegeneracyClusteringAmbiguous";
    case ErrorKind::DimensionTooLarge: return "DimensionTooLarge";
    case ErrorKind::ConfigError: return "ConfigError";
    case ErrorKind::IOError: return "IOError";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

} // namespace kdq
