#pragma once

// Datasets, network topologies, file ingestion and descriptive statistics.

#include "mpss/errors.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mpss {

/// Per-DMU measure matrix. Measures keep their insertion order.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::vector<std::string> dmu_ids);

  /// Throws ValidationError on a length mismatch, a duplicate name or a
  /// non-finite value.
  void add_measure(std::string name, Eigen::VectorXd values, std::string unit = {});

  Eigen::Index size() const noexcept { return static_cast<Eigen::Index>(dmu_ids_.size()); }
  const std::vector<std::string>& dmu_ids() const noexcept { return dmu_ids_; }
  const std::vector<std::string>& measure_names() const noexcept { return names_; }

  bool has_measure(std::string_view name) const;
  const Eigen::VectorXd& measure(std::string_view name) const;
  const std::string& unit(std::string_view name) const;
  void set_unit(std::string_view name, std::string unit);

  /// Stacks the named measures as rows; columns are DMUs.
  Eigen::MatrixXd rows(std::span<const std::string> names) const;

  Eigen::Index index_of(std::string_view dmu) const;

  /// DMUs reordered / subset by index.
  Dataset select(std::span<const Eigen::Index> dmus) const;

  /// Unique ids, strictly positive values.
  void validate() const;

  friend bool operator==(const Dataset& a, const Dataset& b);

 private:
  std::size_t position(std::string_view name) const;

  std::vector<std::string> dmu_ids_;
  std::vector<std::string> names_;
  std::vector<Eigen::VectorXd> values_;
  std::vector<std::string> units_;
};

enum class ShapeTag { two_stage_general, series_parallel_chain };

const char* to_string(ShapeTag shape) noexcept;

struct ProcessSpec {
  std::string name;
  int stage = 1;
  std::vector<std::string> exogenous_inputs;
  std::vector<std::string> intermediate_outputs;
  std::vector<std::string> intermediate_inputs;
  std::vector<std::string> final_outputs;
  double importance_weight = 1.0;

  bool operator==(const ProcessSpec&) const = default;
};

struct Link {
  std::string from;
  std::string to;
  std::string measure;

  bool operator==(const Link&) const = default;
};

struct NetworkTopology {
  std::vector<ProcessSpec> processes;
  std::vector<Link> links;
  ShapeTag shape = ShapeTag::two_stage_general;

  const ProcessSpec* find(std::string_view name) const;
  bool operator==(const NetworkTopology&) const = default;
};

/// Checks everything that does not need data: link endpoints, acyclicity,
/// stage numbering, role uniqueness, weights, and the shape-specific layout.
void validate_structure(const NetworkTopology& topology);

/// validate_structure plus: every referenced measure exists in the dataset.
void validate(const NetworkTopology& topology, const Dataset& dataset);

/// Measure roles of the general two-stage network.
struct TwoStageRoles {
  std::vector<std::string> stage1_inputs;
  std::vector<std::string> intermediates;
  std::vector<std::string> stage1_outputs;
  std::vector<std::string> stage2_inputs;
  std::vector<std::string> stage2_outputs;
};

/// Measure roles of the series-parallel value chain (two parallel
/// processes feeding one market stage).
struct ChainRoles {
  std::string operation_process;
  std::string rd_process;
  std::string market_process;
  std::vector<std::string> operation_inputs;
  std::vector<std::string> rd_inputs;
  std::vector<std::string> operation_intermediates;
  std::vector<std::string> rd_intermediates;
  std::vector<std::string> final_outputs;
};

/// Exogenous inputs and final outputs of the whole system; intermediates dropped.
struct BlackBoxRoles {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
};

TwoStageRoles two_stage_roles(const NetworkTopology& topology);
ChainRoles chain_roles(const NetworkTopology& topology);
BlackBoxRoles black_box_roles(const NetworkTopology& topology);

struct LoadOptions {
  /// When set, nonpositive values are replaced by this value (with a warning)
  /// instead of being rejected.
  std::optional<double> min_epsilon;
};

Dataset parse_dataset_csv(std::string_view text, const LoadOptions& options = {},
                          std::vector<std::string>* warnings = nullptr);
Dataset read_dataset_csv(const std::filesystem::path& path, const LoadOptions& options = {},
                         std::vector<std::string>* warnings = nullptr);

NetworkTopology parse_topology_json(std::string_view text);
NetworkTopology read_topology_json(const std::filesystem::path& path);

struct LoadedModel {
  Dataset dataset;
  NetworkTopology topology;
  std::vector<std::string> warnings;
};

LoadedModel load_dataset(const std::filesystem::path& data_path,
                         const std::filesystem::path& topology_path,
                         const LoadOptions& options = {});

/// Shortest round-trip representation of every value.
std::string to_csv(const Dataset& dataset);
std::string to_json(const NetworkTopology& topology);

std::string read_text_file(const std::filesystem::path& path);

struct MeasureSummary {
  std::string measure;
  double mean = 0;
  double sd = 0;  // sample standard deviation (n - 1 denominator)
  double min = 0;
  double max = 0;
};

struct SummaryStats {
  std::vector<MeasureSummary> measures;
  const MeasureSummary& at(std::string_view measure) const;
};

SummaryStats summarize(const Dataset& dataset);

}  // namespace mpss
