#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace kdq {

enum class ErrorKind {
    GaplessMode,
    IntegrationFailure,
    MomentumMismatch,
    ProjectorError,
    BranchTrackingFailure,
    DegeneracyClusteringAmbiguous,
    DimensionTooLarge,
    ConfigError,
    IOError,
};

std::string_view to_string(ErrorKind kind) noexcept;

// All library failures carry a machine-readable kind so the CLI can report them.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what);

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace kdq
