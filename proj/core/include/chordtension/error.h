#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace chordtension {

enum class ErrorCode {
  // score ingest
  UnsupportedToken,
  MalformedDuration,
  NoKernSpine,
  MalformedRecord,
  NegativeDuration,
  EmptyInput,
  // vocabulary / corpus
  TranspositionOutOfRange,
  EmptyCorpus,
  // embedding
  EmptyTrainingData,
  IdOutOfRange,
  DigestMismatch,
  MalformedModel,
  // tension
  NoPrecedingContext,
  SequenceTooShort,
  // stats
  TooFewSamples,
  TooFewGroups,
  // experiments
  TooFewPieces,
  UnknownPiece,
  IndexOutOfRange,
  // shared
  InvalidConfig,
  ChecksumMismatch,
  Io,
};

/// Stable identifier for an error code, e.g. "NoKernSpine".
std::string_view errorCodeName(ErrorCode code);

/// Library-wide exception. Every failure raised by chordtension carries one
/// of the codes above so callers (and the CLI) can branch without parsing
/// message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failure tied to a 1-based line of the input document.
class ParseError : public Error {
 public:
  ParseError(ErrorCode code, std::size_t line, const std::string& message);

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace chordtension
