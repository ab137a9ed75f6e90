#include "mpss/report.hpp"

#include "mpss/errors.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace mpss {

void ReportTable::add_row(std::vector<Cell> row) {
  if (row.size() != headers.size()) {
    throw std::invalid_argument("report row has " + std::to_string(row.size()) + " cells, expected " +
                                std::to_string(headers.size()));
  }
  rows.push_back(std::move(row));
}

std::string format_cell(const Cell& cell, bool raw) {
  if (!cell.value) return cell.text;
  double v = *cell.value;
  char buf[128];
  if (raw) {
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
  }
  if (std::isfinite(v) && std::abs(v) < 0.5 * std::pow(10.0, -cell.precision)) v = 0.0;  // no "-0.0000"
  const auto [ptr, ec] =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, cell.precision);
  return ec == std::errc() ? std::string(buf, ptr) : std::to_string(v);
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (const char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string md_field(const std::string& s) {
  std::string out;
  for (const char ch : s) {
    if (ch == '|') out += '\\';
    out += ch;
  }
  return out;
}

std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char ch = line[i];
    if (quoted) {
      if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        current += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        current += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else if (ch != '\r') {
      current += ch;
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

Cell parse_cell(const std::string& text) {
  double v = 0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) return Cell::of(text);
  const auto dot = text.find('.');
  const int precision = dot == std::string::npos ? 0 : static_cast<int>(text.size() - dot - 1);
  return Cell::of(v, precision);
}

}  // namespace

std::string render(const ReportTable& table, Format format, bool raw) {
  std::vector<std::vector<std::string>> cells;
  for (const auto& row : table.rows) {
    std::vector<std::string> line;
    for (const auto& c : row) line.push_back(format_cell(c, raw));
    cells.push_back(std::move(line));
  }

  std::string out;
  if (format == Format::csv) {
    for (std::size_t i = 0; i < table.headers.size(); ++i) {
      out += (i ? "," : "") + csv_field(table.headers[i]);
    }
    out += "\n";
    for (const auto& line : cells) {
      for (std::size_t i = 0; i < line.size(); ++i) out += (i ? "," : "") + csv_field(line[i]);
      out += "\n";
    }
    return out;
  }

  if (!table.title.empty()) out += "**" + table.title + "**\n\n";
  out += "|";
  for (const auto& h : table.headers) out += " " + md_field(h) + " |";
  out += "\n|";
  for (std::size_t i = 0; i < table.headers.size(); ++i) {
    // Right-align columns that hold numbers.
    const bool numeric = !table.rows.empty() &&
                         std::all_of(table.rows.begin(), table.rows.end(),
                                     [&](const auto& r) { return r[i].value.has_value(); });
    out += numeric ? " ---: |" : " --- |";
  }
  out += "\n";
  for (const auto& line : cells) {
    out += "|";
    for (const auto& c : line) out += " " + md_field(c) + " |";
    out += "\n";
  }
  return out;
}

ReportTable parse_report_csv(std::string_view text) {
  ReportTable table;
  bool header = true;
  while (!text.empty()) {
    const auto end = text.find('\n');
    const std::string_view line = text.substr(0, end);
    text.remove_prefix(end == std::string_view::npos ? text.size() : end + 1);
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_line(line);
    if (header) {
      table.headers = std::move(fields);
      header = false;
      continue;
    }
    std::vector<Cell> row;
    for (const auto& f : fields) row.push_back(parse_cell(f));
    if (row.size() != table.headers.size()) {
      throw ValidationError("report row has " + std::to_string(row.size()) + " cells, expected " +
                            std::to_string(table.headers.size()));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace mpss
