#include "pixflow/error.hpp"

namespace pixflow {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::UnsupportedFormat: return "UnsupportedFormat";
    case ErrorCode::CorruptImage: return "CorruptImage";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidCrop: return "InvalidCrop";
    case ErrorCode::UpscaleNotSupported: return "UpscaleNotSupported";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::DisconnectedForcing: return "DisconnectedForcing";
    case ErrorCode::SolveFailure: return "SolveFailure";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::BetaSingular: return "BetaSingular";
    case ErrorCode::EmptyFilter: return "EmptyFilter";
    case ErrorCode::DegenerateTree: return "DegenerateTree";
    case ErrorCode::PreconditionViolation: return "PreconditionViolation";
    case ErrorCode::TooFewLeaves: return "TooFewLeaves";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::AllRunsFailed: return "AllRunsFailed";
    case ErrorCode::UsageError: return "UsageError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace pixflow
