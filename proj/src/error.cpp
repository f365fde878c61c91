#include "fairfront/error.hpp"

namespace fairfront {

std::string_view error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::MalformedCsv: return "MalformedCsv";
    case ErrorCode::MissingColumn: return "MissingColumn";
    case ErrorCode::BadScore: return "BadScore";
    case ErrorCode::BadOutcome: return "BadOutcome";
    case ErrorCode::BadAmount: return "BadAmount";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::BadRule: return "BadRule";
    case ErrorCode::Io: return "Io";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::MissingGroupThreshold: return "MissingGroupThreshold";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::DegenerateSpec: return "DegenerateSpec";
    case ErrorCode::UnknownAttribute: return "UnknownAttribute";
    case ErrorCode::AttributeTypeMismatch: return "AttributeTypeMismatch";
    case ErrorCode::EmptyPosition: return "EmptyPosition";
    case ErrorCode::TooFewGroups: return "TooFewGroups";
    case ErrorCode::WeightLengthMismatch: return "WeightLengthMismatch";
    case ErrorCode::AllZeroWeights: return "AllZeroWeights";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::EmptySweep: return "EmptySweep";
    case ErrorCode::SweepTooLarge: return "SweepTooLarge";
  }
  return "Unknown";
}

ErrorClass error_class(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyFile:
    case ErrorCode::MalformedCsv:
    case ErrorCode::MissingColumn:
    case ErrorCode::BadScore:
    case ErrorCode::BadOutcome:
    case ErrorCode::BadAmount:
    case ErrorCode::DuplicateId:
    case ErrorCode::SchemaViolation:
    case ErrorCode::BadRule:
    case ErrorCode::Io:
      return ErrorClass::Input;
    case ErrorCode::SweepTooLarge:
      return ErrorClass::Capacity;
    default:
      return ErrorClass::Semantic;
  }
}

Error::Error(ErrorCode code, std::string message, std::string detail,
             std::optional<std::size_t> row, std::string column)
    : std::runtime_error(std::move(message)),
      code_(code),
      detail_(std::move(detail)),
      row_(row),
      column_(std::move(column)) {}

}  // namespace fairfront
