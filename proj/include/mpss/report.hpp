#pragma once

// Tabular reports rendered as CSV or markdown.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mpss {

inline constexpr int mpss_precision = 4;
inline constexpr int efficiency_precision = 3;

struct Cell {
  std::string text;
  std::optional<double> value;
  int precision = mpss_precision;

  static Cell of(std::string text) { return {std::move(text), std::nullopt, 0}; }
  static Cell of(double value, int precision = mpss_precision) { return {{}, value, precision}; }

  bool operator==(const Cell&) const = default;
};

struct ReportTable {
  std::string title;
  std::vector<std::string> headers;
  std::vector<std::vector<Cell>> rows;

  /// Throws std::invalid_argument when the row width differs from the header.
  void add_row(std::vector<Cell> row);
};

enum class Format { csv, markdown };

/// Numbers are printed fixed to their cell precision, or with the shortest
/// round-trip representation when raw is set.
std::string render(const ReportTable& table, Format format, bool raw = false);

std::string format_cell(const Cell& cell, bool raw = false);

/// Reads CSV output of render back; numeric cells regain their value and
/// the precision implied by their decimals.
ReportTable parse_report_csv(std::string_view text);

}  // namespace mpss
