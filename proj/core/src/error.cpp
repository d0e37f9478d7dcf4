#include "chordtension/error.h"

namespace chordtension {

std::string_view errorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnsupportedToken:        return "UnsupportedToken";
    case ErrorCode::MalformedDuration:       return "MalformedDuration";
    case ErrorCode::NoKernSpine:             return "NoKernSpine";
    case ErrorCode::MalformedRecord:         return "MalformedRecord";
    case ErrorCode::NegativeDuration:        return "NegativeDuration";
    case ErrorCode::EmptyInput:              return "EmptyInput";
    case ErrorCode::TranspositionOutOfRange: return "TranspositionOutOfRange";
    case ErrorCode::EmptyCorpus:             return "EmptyCorpus";
    case ErrorCode::EmptyTrainingData:       return "EmptyTrainingData";
    case ErrorCode::IdOutOfRange:            return "IdOutOfRange";
    case ErrorCode::DigestMismatch:          return "DigestMismatch";
    case ErrorCode::MalformedModel:          return "MalformedModel";
    case ErrorCode::NoPrecedingContext:      return "NoPrecedingContext";
    case ErrorCode::SequenceTooShort:        return "SequenceTooShort";
    case ErrorCode::TooFewSamples:           return "TooFewSamples";
    case ErrorCode::TooFewGroups:            return "TooFewGroups";
    case ErrorCode::TooFewPieces:            return "TooFewPieces";
    case ErrorCode::UnknownPiece:            return "UnknownPiece";
    case ErrorCode::IndexOutOfRange:         return "IndexOutOfRange";
    case ErrorCode::InvalidConfig:           return "InvalidConfig";
    case ErrorCode::ChecksumMismatch:        return "ChecksumMismatch";
    case ErrorCode::Io:                      return "Io";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(errorCodeName(code)) + ": " + message), code_(code) {}

ParseError::ParseError(ErrorCode code, std::size_t line, const std::string& message)
    : Error(code, "line " + std::to_string(line) + ": " + message), line_(line) {}

}  // namespace chordtension
