#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace orthodraw {

enum class ErrorCode {
    InvalidInput,
    Precondition,
    Dimension,
    Degeneracy,
    NotEutactic,
    NotAnImage,
    NotACubeImage,
    Conditioning,
    InvalidForm,
    Lookup,
    InvalidAxes,
    UndefinedRatio,
    DegenerateConfiguration,
    Parse,
    Schema,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidInput: return "invalid-input";
    case ErrorCode::Precondition: return "precondition";
    case ErrorCode::Dimension: return "dimension";
    case ErrorCode::Degeneracy: return "degeneracy";
    case ErrorCode::NotEutactic: return "not-eutactic";
    case ErrorCode::NotAnImage: return "not-an-image";
    case ErrorCode::NotACubeImage: return "not-a-cube-image";
    case ErrorCode::Conditioning: return "conditioning";
    case ErrorCode::InvalidForm: return "invalid-form";
    case ErrorCode::Lookup: return "lookup";
    case ErrorCode::InvalidAxes: return "invalid-axes";
    case ErrorCode::UndefinedRatio: return "undefined-ratio";
    case ErrorCode::DegenerateConfiguration: return "degenerate-configuration";
    case ErrorCode::Parse: return "parse";
    case ErrorCode::Schema: return "schema";
    }
    return "unknown";
}

/// Every failure raised by the library. `residual()` is set when the failure
/// came from a numerical test (not-eutactic, not-an-image, ...).
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message, std::optional<double> residual = std::nullopt)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), residual_(residual) {}

    ErrorCode code() const noexcept { return code_; }
    std::optional<double> residual() const noexcept { return residual_; }

private:
    ErrorCode code_;
    std::optional<double> residual_;
};

}  // namespace orthodraw
