#pragma once

// Dataset CSV ingestion and the JSON value-configuration file.

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"

#include "fairfront/core_model.hpp"
#include "fairfront/justice.hpp"
#include "fairfront/sweep.hpp"
#include "fairfront/utility.hpp"

namespace fairfront {

struct DatasetSchema {
  std::string score_column = "score";
  std::string group_column = "group";
  std::string outcome_column = "outcome";
  std::optional<std::string> amount_column;
  std::optional<std::string> id_column;
  /// Columns copied into Individual::attributes. When unset, every column not
  /// used above becomes an attribute.
  std::optional<std::vector<std::string>> attribute_columns;

  bool operator==(const DatasetSchema&) const = default;
};

/// One parsed CSV table: header plus rows of raw fields.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// RFC 4180 reader: comma separator, double-quote quoting with "" escapes,
/// CRLF or LF line ends, optional UTF-8 BOM. Throws EmptyFile or
/// MalformedCsv (with row).
CsvTable read_csv(std::string_view text);

Dataset parse_dataset(std::string_view csv_text, const DatasetSchema& schema);
Dataset parse_dataset(std::istream& in, const DatasetSchema& schema);

struct LinspaceGrid {
  std::size_t n = kDefaultGridSize;
  double lo = 0.0;
  double hi = 1.0;
  bool operator==(const LinspaceGrid&) const = default;
};

/// Explicit threshold lists keyed by group label (sorted by label).
struct ExplicitGrid {
  std::vector<std::pair<std::string, std::vector<double>>> per_group;
  bool operator==(const ExplicitGrid&) const = default;
};

using GridSpec = std::variant<LinspaceGrid, ExplicitGrid>;

/// Every stakeholder value choice that feeds a sweep.
struct ValueConfig {
  DMUtilitySpec dm_spec = LendingUtility{0.1};
  DSUtilitySpec ds_spec;
  ClaimsDifferentiator differentiator = AllClaims{};
  std::string group_column = "group";
  PatternOfJustice pattern = Maximin{};
  EvaluationMode mode = EvaluationMode::Expected;
  GridSpec grid = LinspaceGrid{};
  double viability_floor = 0.0;

  bool operator==(const ValueConfig&) const = default;
};

/// Throws SchemaViolation whose detail is a JSON pointer to the offending
/// value.
ValueConfig parse_config(std::string_view json_text);
ValueConfig config_from_json(const nlohmann::json& doc);

/// Canonical form: fixed key order, every default written out.
nlohmann::json config_to_json(const ValueConfig& config);
std::string serialize_config(const ValueConfig& config);

/// Hex SHA-256 of serialize_config.
std::string config_digest(const ValueConfig& config);

/// Hex SHA-256 of arbitrary bytes.
std::string sha256_hex(std::string_view bytes);

/// Dataset-dependent checks: weight count, override and grid group names.
/// Throws SchemaViolation.
void check_config_against(const ValueConfig& config, const Dataset& dataset);

ThresholdGrid make_grid(const ValueConfig& config, const Dataset& dataset);

std::string_view mode_name(EvaluationMode mode) noexcept;
std::string_view compare_op_name(CompareOp op) noexcept;

}  // namespace fairfront
