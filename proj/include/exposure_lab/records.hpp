// records.hpp
// Homogeneous result tables and their CSV/JSON serialization.
//
// CSV: ',' separator, '.' decimal point, LF line endings, doubles at 17 significant
// digits, empty cell for a missing value, booleans as true/false.
// JSON: {"schema_version", "command", "config", "columns", "rows", "diagnostics",
// "extras"}, rows as objects keyed by column; missing and non-finite values are null.

#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace exposure_lab::records {

inline constexpr const char* kSchemaVersion = "1";

/// monostate marks a missing value.
using Cell = std::variant<std::monostate, double, std::int64_t, bool, std::string>;

class Table {
 public:
  Table() = default;
  explicit Table(std::vector<std::string> columns);

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  const std::vector<std::vector<Cell>>& rows() const noexcept { return rows_; }

  /// Throws invalid-argument when the row width differs from the column count.
  void add_row(std::vector<Cell> row);

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<Cell>> rows_;
};

struct Envelope {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  Table table;
  std::vector<std::string> diagnostics;
  nlohmann::json extras = nlohmann::json::object();
};

enum class Format { Csv, Json };

/// "%.17g", or nan / inf / -inf.
std::string format_double(double v);

std::string to_csv(const Table& table);
nlohmann::json to_json(const Envelope& envelope);

/// CSV holds only the table; JSON holds the whole envelope (pretty-printed, trailing LF).
std::string render(const Envelope& envelope, Format format);

/// "json" when the path ends in .json, otherwise "csv".
Format format_for_path(const std::string& path);

/// Writes to path + ".tmp" and renames over `path`, so readers never see a partial file.
/// Throws io-error on any failure (and removes the temporary).
void write_atomic(const std::string& path, const std::string& content);

/// Minimal CSV reader for the files written above (quoted fields allowed).
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

}  // namespace exposure_lab::records
