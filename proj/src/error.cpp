#include "gridrig/error.hpp"

namespace gridrig {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NonSmoothPoint: return "NonSmoothPoint";
    case ErrorCode::MalformedDocument: return "MalformedDocument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::UnknownBraceChar: return "UnknownBraceChar";
    case ErrorCode::InvalidNorm: return "InvalidNorm";
    case ErrorCode::DegenerateTangent: return "DegenerateTangent";
    case ErrorCode::NotACycle: return "NotACycle";
    case ErrorCode::NoWitness: return "NoWitness";
    case ErrorCode::UnsupportedConfiguration: return "UnsupportedConfiguration";
    case ErrorCode::ExceptionalParameters: return "ExceptionalParameters";
    case ErrorCode::TooLarge: return "TooLarge";
  }
  return "Unknown";
}

}  // namespace gridrig
