#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace fairfront {

enum class ErrorCode {
  // input / parse
  EmptyFile,
  MalformedCsv,
  MissingColumn,
  BadScore,
  BadOutcome,
  BadAmount,
  DuplicateId,
  SchemaViolation,
  BadRule,
  Io,
  // semantic
  InvalidArgument,
  MissingGroupThreshold,
  LengthMismatch,
  DegenerateSpec,
  UnknownAttribute,
  AttributeTypeMismatch,
  EmptyPosition,
  TooFewGroups,
  WeightLengthMismatch,
  AllZeroWeights,
  InvalidRange,
  EmptySweep,
  // resource
  SweepTooLarge,
};

/// Coarse class of an error, used for process exit codes and C status codes.
enum class ErrorClass { Input = 1, Semantic = 2, Capacity = 3 };

std::string_view error_code_name(ErrorCode code) noexcept;
ErrorClass error_class(ErrorCode code) noexcept;

/// Library-wide exception. `detail` carries the offending object (group label,
/// attribute name, JSON path, ...); `row` and `column` are set for tabular input
/// errors (row is 1-based over data rows, header excluded).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string detail = {},
        std::optional<std::size_t> row = std::nullopt, std::string column = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }
  std::optional<std::size_t> row() const noexcept { return row_; }
  const std::string& column() const noexcept { return column_; }

 private:
  ErrorCode code_;
  std::string detail_;
  std::optional<std::size_t> row_;
  std::string column_;
};

}  // namespace fairfront
