#include "mpss/model_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace mpss {

Dataset::Dataset(std::vector<std::string> dmu_ids) : dmu_ids_(std::move(dmu_ids)) {}

void Dataset::add_measure(std::string name, Eigen::VectorXd values, std::string unit) {
  if (name.empty()) throw ValidationError("measure name must not be empty");
  if (has_measure(name)) throw ValidationError("duplicate measure '" + name + "'");
  if (values.size() != size()) {
    throw ValidationError("measure '" + name + "' has " + std::to_string(values.size()) +
                          " values for " + std::to_string(size()) + " DMUs");
  }
  if (!values.allFinite()) throw ValidationError("measure '" + name + "' has a non-finite value");
  names_.push_back(std::move(name));
  values_.push_back(std::move(values));
  units_.push_back(std::move(unit));
}

std::size_t Dataset::position(std::string_view name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) {
    throw ValidationError("measure '" + std::string(name) + "' is not in the dataset");
  }
  return static_cast<std::size_t>(it - names_.begin());
}

bool Dataset::has_measure(std::string_view name) const {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

const Eigen::VectorXd& Dataset::measure(std::string_view name) const {
  return values_[position(name)];
}

const std::string& Dataset::unit(std::string_view name) const { return units_[position(name)]; }

void Dataset::set_unit(std::string_view name, std::string unit) {
  units_[position(name)] = std::move(unit);
}

Eigen::MatrixXd Dataset::rows(std::span<const std::string> names) const {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(names.size()), size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = measure(names[i]).transpose();
  }
  return out;
}

Eigen::Index Dataset::index_of(std::string_view dmu) const {
  const auto it = std::find(dmu_ids_.begin(), dmu_ids_.end(), dmu);
  if (it == dmu_ids_.end()) throw UnknownDmu(std::string(dmu));
  return static_cast<Eigen::Index>(it - dmu_ids_.begin());
}

Dataset Dataset::select(std::span<const Eigen::Index> dmus) const {
  std::vector<std::string> ids;
  ids.reserve(dmus.size());
  for (const Eigen::Index j : dmus) ids.push_back(dmu_ids_.at(static_cast<std::size_t>(j)));
  Dataset out(std::move(ids));
  for (std::size_t k = 0; k < names_.size(); ++k) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(dmus.size()));
    for (std::size_t i = 0; i < dmus.size(); ++i) v(static_cast<Eigen::Index>(i)) = values_[k](dmus[i]);
    out.add_measure(names_[k], std::move(v), units_[k]);
  }
  return out;
}

void Dataset::validate() const {
  std::set<std::string_view> seen;
  for (const auto& id : dmu_ids_) {
    if (!seen.insert(id).second) throw ValidationError("duplicate DMU id '" + id + "'");
  }
  for (std::size_t k = 0; k < names_.size(); ++k) {
    for (Eigen::Index j = 0; j < size(); ++j) {
      if (!(values_[k](j) > 0.0)) {
        std::ostringstream os;
        os << "value " << values_[k](j) << " for DMU '" << dmu_ids_[static_cast<std::size_t>(j)]
           << "' is not strictly positive";
        throw ValidationError(os.str(), std::nullopt, names_[k]);
      }
    }
  }
}

bool operator==(const Dataset& a, const Dataset& b) {
  if (a.dmu_ids_ != b.dmu_ids_ || a.names_ != b.names_ || a.units_ != b.units_) return false;
  for (std::size_t k = 0; k < a.values_.size(); ++k) {
    if (a.values_[k].size() != b.values_[k].size() || a.values_[k] != b.values_[k]) return false;
  }
  return true;
}

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split_fields(std::string_view line) {
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
      fields.emplace_back(trim(current));
      current.clear();
    } else {
      current += ch;
    }
  }
  fields.emplace_back(trim(current));
  return fields;
}

std::optional<double> parse_number(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::to_string(v);
}

bool needs_quotes(std::string_view s) {
  return s.find_first_of(",\"\n") != std::string_view::npos || trim(s) != s;
}

std::string quote(std::string_view s) {
  if (!needs_quotes(s)) return std::string(s);
  std::string out = "\"";
  for (const char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

Dataset parse_dataset_csv(std::string_view text, const LoadOptions& options,
                          std::vector<std::string>* warnings) {
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
  std::vector<std::pair<long, std::string_view>> lines;
  long number = 0;
  while (!text.empty()) {
    const auto end = text.find('\n');
    const std::string_view line = text.substr(0, end);
    ++number;
    if (!trim(line).empty()) lines.emplace_back(number, line);
    if (end == std::string_view::npos) break;
    text.remove_prefix(end + 1);
  }
  if (lines.empty()) throw ValidationError("data file is empty");

  const auto header = split_fields(lines.front().second);
  if (header.empty() || header.front() != "dmu") {
    throw ValidationError("first header cell must be 'dmu'", lines.front().first);
  }
  if (header.size() < 2) throw ValidationError("no measure columns", lines.front().first);
  std::set<std::string> names;
  for (std::size_t c = 1; c < header.size(); ++c) {
    if (header[c].empty()) {
      throw ValidationError("empty measure name in column " + std::to_string(c + 1),
                            lines.front().first);
    }
    if (!names.insert(header[c]).second) {
      throw ValidationError("duplicate measure column", lines.front().first, header[c]);
    }
  }

  const std::size_t measures = header.size() - 1;
  const std::size_t dmus = lines.size() - 1;
  std::vector<std::string> ids;
  std::set<std::string> seen;
  std::vector<Eigen::VectorXd> columns(measures, Eigen::VectorXd(static_cast<Eigen::Index>(dmus)));
  for (std::size_t r = 0; r < dmus; ++r) {
    const auto [line_no, line] = lines[r + 1];
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw ValidationError("expected " + std::to_string(header.size()) + " cells, found " +
                                std::to_string(fields.size()),
                            line_no);
    }
    if (fields.front().empty()) throw ValidationError("empty DMU id", line_no, "dmu");
    if (!seen.insert(fields.front()).second) {
      throw ValidationError("duplicate DMU id '" + fields.front() + "'", line_no, "dmu");
    }
    ids.push_back(fields.front());
    for (std::size_t c = 0; c < measures; ++c) {
      const auto& cell = fields[c + 1];
      const auto value = parse_number(cell);
      if (!value || !std::isfinite(*value)) {
        throw ValidationError("non-numeric value '" + cell + "'", line_no, header[c + 1]);
      }
      double v = *value;
      if (!(v > 0.0)) {
        if (!options.min_epsilon) {
          throw ValidationError("value " + cell + " is not strictly positive", line_no,
                                header[c + 1]);
        }
        if (warnings) {
          warnings->push_back("line " + std::to_string(line_no) + ", column '" + header[c + 1] +
                              "': value " + cell + " replaced by " +
                              format_number(*options.min_epsilon));
        }
        v = *options.min_epsilon;
      }
      columns[c](static_cast<Eigen::Index>(r)) = v;
    }
  }

  Dataset out(std::move(ids));
  for (std::size_t c = 0; c < measures; ++c) out.add_measure(header[c + 1], std::move(columns[c]));
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Dataset read_dataset_csv(const std::filesystem::path& path, const LoadOptions& options,
                         std::vector<std::string>* warnings) {
  return parse_dataset_csv(read_text_file(path), options, warnings);
}

std::string to_csv(const Dataset& dataset) {
  std::string out = "dmu";
  for (const auto& name : dataset.measure_names()) out += "," + quote(name);
  out += "\n";
  for (Eigen::Index j = 0; j < dataset.size(); ++j) {
    out += quote(dataset.dmu_ids()[static_cast<std::size_t>(j)]);
    for (const auto& name : dataset.measure_names()) {
      out += "," + format_number(dataset.measure(name)(j));
    }
    out += "\n";
  }
  return out;
}

LoadedModel load_dataset(const std::filesystem::path& data_path,
                         const std::filesystem::path& topology_path, const LoadOptions& options) {
  LoadedModel model;
  model.dataset = read_dataset_csv(data_path, options, &model.warnings);
  model.topology = read_topology_json(topology_path);
  validate(model.topology, model.dataset);
  model.dataset.validate();
  return model;
}

}  // namespace mpss
