#include <charconv>
#include <cmath>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

#include "fairfront/error.hpp"
#include "fairfront/io.hpp"

namespace fairfront {

CsvTable read_csv(std::string_view text) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  bool record_started = false;
  std::size_t line = 1;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    // Blank lines carry no data.
    if (!(record.size() == 1 && record[0].empty())) records.push_back(std::move(record));
    record.clear();
    record_started = false;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_was_quoted) {
          throw Error(ErrorCode::MalformedCsv, "unexpected quote inside field", {},
                      records.empty() ? 0 : records.size(), {});
        }
        in_quotes = true;
        field_was_quoted = true;
        record_started = true;
        break;
      case ',':
        end_field();
        record_started = true;
        break;
      case '\r':
        if (i + 1 < text.size() && text[i + 1] == '\n') break;
        [[fallthrough]];
      case '\n':
        ++line;
        end_record();
        break;
      default:
        if (field_was_quoted) {
          throw Error(ErrorCode::MalformedCsv, "text after closing quote", {},
                      records.empty() ? 0 : records.size(), {});
        }
        field.push_back(c);
        record_started = true;
    }
  }
  if (in_quotes) {
    throw Error(ErrorCode::MalformedCsv, "unterminated quoted field", {},
                records.empty() ? 0 : records.size(), {});
  }
  if (record_started || !field.empty()) end_record();

  if (records.empty()) throw Error(ErrorCode::EmptyFile, "file has no header row");
  CsvTable table;
  table.header = std::move(records.front());
  table.rows.assign(std::make_move_iterator(records.begin() + 1),
                    std::make_move_iterator(records.end()));
  std::set<std::string> names;
  for (const auto& name : table.header) {
    if (!names.insert(name).second) {
      throw Error(ErrorCode::MalformedCsv, "duplicate column '" + name + "'", name, 0, name);
    }
  }
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    if (table.rows[r].size() != table.header.size()) {
      throw Error(ErrorCode::MalformedCsv,
                  "row has " + std::to_string(table.rows[r].size()) + " fields, header has " +
                      std::to_string(table.header.size()),
                  {}, r + 1, {});
    }
  }
  return table;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_real(std::string_view s) {
  s = trim(s);
  if (s.starts_with('+')) s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

std::size_t column_index(const CsvTable& table, const std::string& name) {
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (table.header[c] == name) return c;
  }
  throw Error(ErrorCode::MissingColumn, "missing column '" + name + "'", name, std::nullopt, name);
}

}  // namespace

Dataset parse_dataset(std::string_view csv_text, const DatasetSchema& schema) {
  if (schema.score_column == schema.group_column || schema.score_column == schema.outcome_column ||
      schema.group_column == schema.outcome_column) {
    throw Error(ErrorCode::SchemaViolation, "score, group and outcome columns must be distinct",
                "/schema");
  }
  const CsvTable table = read_csv(csv_text);
  const std::size_t score_col = column_index(table, schema.score_column);
  const std::size_t group_col = column_index(table, schema.group_column);
  const std::size_t outcome_col = column_index(table, schema.outcome_column);
  const std::optional<std::size_t> amount_col =
      schema.amount_column ? std::optional(column_index(table, *schema.amount_column))
                           : std::nullopt;
  const std::optional<std::size_t> id_col =
      schema.id_column ? std::optional(column_index(table, *schema.id_column)) : std::nullopt;

  std::vector<std::pair<std::string, std::size_t>> attribute_cols;
  if (schema.attribute_columns) {
    for (const auto& name : *schema.attribute_columns) {
      attribute_cols.emplace_back(name, column_index(table, name));
    }
  } else {
    for (std::size_t c = 0; c < table.header.size(); ++c) {
      if (c == score_col || c == group_col || c == outcome_col || c == amount_col || c == id_col) {
        continue;
      }
      attribute_cols.emplace_back(table.header[c], c);
    }
  }

  if (table.rows.empty()) throw Error(ErrorCode::EmptyFile, "file has no data rows");

  std::vector<Individual> individuals;
  individuals.reserve(table.rows.size());
  std::set<std::string> ids;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    const std::size_t row_no = r + 1;
    Individual ind;
    ind.id = id_col ? row[*id_col] : std::to_string(row_no);
    if (!ids.insert(ind.id).second) {
      throw Error(ErrorCode::DuplicateId, "duplicate id '" + ind.id + "'", ind.id, row_no,
                  id_col ? *schema.id_column : "id");
    }

    const auto score = parse_real(row[score_col]);
    if (!score || *score < 0.0 || *score > 1.0) {
      throw Error(ErrorCode::BadScore, "score '" + row[score_col] + "' is not a number in [0, 1]",
                  row[score_col], row_no, schema.score_column);
    }
    ind.score = *score;
    ind.group = row[group_col];

    const std::string_view outcome = trim(row[outcome_col]);
    if (outcome == "0" || outcome == "1") {
      ind.outcome = outcome == "1" ? 1 : 0;
    } else {
      throw Error(ErrorCode::BadOutcome, "outcome '" + row[outcome_col] + "' is not 0 or 1",
                  row[outcome_col], row_no, schema.outcome_column);
    }

    if (amount_col) {
      const auto amount = parse_real(row[*amount_col]);
      if (!amount || *amount < 0.0) {
        throw Error(ErrorCode::BadAmount,
                    "amount '" + row[*amount_col] + "' is not a non-negative number",
                    row[*amount_col], row_no, *schema.amount_column);
      }
      ind.amount = *amount;
    }

    for (const auto& [name, c] : attribute_cols) {
      if (auto number = parse_real(row[c])) {
        ind.attributes.emplace(name, *number);
      } else {
        ind.attributes.emplace(name, row[c]);
      }
    }
    individuals.push_back(std::move(ind));
  }
  return Dataset::create(std::move(individuals));
}

Dataset parse_dataset(std::istream& in, const DatasetSchema& schema) {
  std::string text{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  return parse_dataset(text, schema);
}

}  // namespace fairfront
