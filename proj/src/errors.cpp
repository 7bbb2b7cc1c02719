#include "xsbridge/errors.hpp"

namespace xsbridge {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::OutOfRange: return "OutOfRange";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::NotNormalized: return "NotNormalized";
    case ErrorCode::TooShort: return "TooShort";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::FieldOverflow: return "FieldOverflow";
    case ErrorCode::PayloadSizeMismatch: return "PayloadSizeMismatch";
    case ErrorCode::ItemCountMismatch: return "ItemCountMismatch";
    case ErrorCode::InvalidItem: return "InvalidItem";
    case ErrorCode::IncompleteFrame: return "IncompleteFrame";
    case ErrorCode::InvalidScale: return "InvalidScale";
    case ErrorCode::MalformedXml: return "MalformedXml";
    case ErrorCode::UnsupportedJointType: return "UnsupportedJointType";
    case ErrorCode::PayloadTooSmall: return "PayloadTooSmall";
    case ErrorCode::BindFailed: return "BindFailed";
    case ErrorCode::ConnectionLost: return "ConnectionLost";
    case ErrorCode::SendFailed: return "SendFailed";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::BadLogMagic: return "BadLogMagic";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

void fail(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace xsbridge
