#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace medaide {

enum class ErrorCode {
  kInvalidArgument,
  kIo,
  kFormat,
  kConfig,
  kCyclicUnitChain,
  kNoParse,
  kZeroNorm,
  kDimensionMismatch,
  kEmptyInput,
  kEmptyText,
  kEmptyReference,
  kEmptyCorpus,
  kDuplicateId,
  kDuplicateKey,
  kUnknownKey,
  kBadMagic,
  kBadVersion,
  kTruncatedFile,
  kTransport,
  kReplayMiss,
  kScriptMiss,
  kUnparseableReply,
  kNotFound,
  kLengthMismatch,
};

std::string_view to_string(ErrorCode code);

// Errors raised by a chat or embedding backend. The coordinator treats these
// as fatal for the whole session.
bool is_gateway_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  // Message without the "<Code>: " prefix carried by what().
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace medaide
