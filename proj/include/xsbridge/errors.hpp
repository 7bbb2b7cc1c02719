#pragma once

#include <stdexcept>
#include <string>

namespace xsbridge {

enum class ErrorCode {
  OutOfRange,
  NonFinite,
  NotNormalized,
  TooShort,
  BadMagic,
  FieldOverflow,
  PayloadSizeMismatch,
  ItemCountMismatch,
  InvalidItem,
  IncompleteFrame,
  InvalidScale,
  MalformedXml,
  UnsupportedJointType,
  PayloadTooSmall,
  BindFailed,
  ConnectionLost,
  SendFailed,
  IoError,
  BadLogMagic,
  ConfigError,
};

const char* error_code_name(ErrorCode code);

/// Single exception type for the whole library; the code tells callers
/// which contract was violated.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const { return code_; }

private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace xsbridge
