#include "medaide/common/error.hpp"

namespace medaide {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kFormat: return "Format";
    case ErrorCode::kConfig: return "Config";
    case ErrorCode::kCyclicUnitChain: return "CyclicUnitChain";
    case ErrorCode::kNoParse: return "NoParse";
    case ErrorCode::kZeroNorm: return "ZeroNorm";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kEmptyText: return "EmptyText";
    case ErrorCode::kEmptyReference: return "EmptyReference";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kDuplicateKey: return "DuplicateKey";
    case ErrorCode::kUnknownKey: return "UnknownKey";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kBadVersion: return "BadVersion";
    case ErrorCode::kTruncatedFile: return "TruncatedFile";
    case ErrorCode::kTransport: return "Transport";
    case ErrorCode::kReplayMiss: return "ReplayMiss";
    case ErrorCode::kScriptMiss: return "ScriptMiss";
    case ErrorCode::kUnparseableReply: return "UnparseableReply";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
  }
  return "Unknown";
}

bool is_gateway_error(ErrorCode code) {
  return code == ErrorCode::kTransport || code == ErrorCode::kReplayMiss ||
         code == ErrorCode::kScriptMiss || code == ErrorCode::kUnparseableReply;
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      detail_(message) {}

}  // namespace medaide
