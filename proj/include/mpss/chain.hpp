#pragma once

// Series-parallel value chain: an operation process and an R&D process
// working in parallel, both feeding a market stage through intermediate
// measures. Provides the one-step efficiency model, the chain MPSS model
// with free intermediate targets, the profitability-stage MPSS model with
// radial intermediates, and target setting from the MPSS targets.

#include "mpss/model_io.hpp"
#include "mpss/network.hpp"

#include <Eigen/Dense>

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace mpss {

struct ChainWeights {
  double w1 = 1.0;
  double w2 = 1.0;
  double w3 = 1.0;

  /// Halves the two contraction weights so that the self-reference
  /// solution scores zero in the MPSS model.
  static ChainWeights normalized() noexcept { return {1.0, 0.5, 0.5}; }

  /// Throws ValidationError on a negative or non-finite weight.
  void validate() const;
};

struct ChainMatrices {
  Eigen::MatrixXd xo, xr, zo, zr, y;
  std::vector<std::string> operation_intermediates;
  std::vector<std::string> rd_intermediates;

  Eigen::Index dmus() const noexcept { return xo.cols(); }
};

ChainMatrices chain_matrices(const Dataset& dataset, const ChainRoles& roles);

struct ChainEfficiency {
  double theta_o = 1;
  double theta_r = 1;
  double theta_m = 1;
  double marketability_efficiency = 1;  // 1 / theta_m
  double objective = 1;
  /// Intermediate targets of the efficiency model, keyed by measure.
  std::map<std::string, double> intermediates;
  bool alternative_optima = false;

  /// Objective at its upper bound w1 + w2 - w3.
  bool efficient(const ChainWeights& w = {}, double eps = mpss_epsilon) const noexcept;
};

struct ChainMpss {
  double score = 0;
  double theta_o = 1;
  double theta_r = 1;
  double theta_m = 1;
  /// Appropriate intermediate levels, keyed by measure.
  std::map<std::string, double> intermediates;
  std::vector<Eigen::VectorXd> reference_weights;  // lambda, mu, phi
  /// Some target could move along a zero-reduced-cost direction.
  bool alternative_optima = false;

  bool is_mpss(double eps = mpss_epsilon) const noexcept { return score <= eps && score >= -eps; }
};

struct StageFactors {
  double theta1 = 1, theta2 = 1, theta3 = 1, theta4 = 1, theta_m = 1;
  double operation_mpss = 0;      // theta2 - theta1
  double rd_mpss = 0;             // theta4 - theta3
  double profitability_mpss = 0;  // operation + rd
  double marketability_mpss = 0;  // chain score - profitability
};

ChainEfficiency chain_efficiency(const ChainMatrices& data, Eigen::Index dmu,
                                 const ChainWeights& weights = {});
ChainMpss chain_mpss(const ChainMatrices& data, Eigen::Index dmu,
                     const ChainWeights& weights = {});

/// Holds w1 theta_m - w2 theta1 - w3 theta3 within +-band of chain_score.
/// Throws SolverError when the band cannot be met.
StageFactors profitability_mpss(const ChainMatrices& data, Eigen::Index dmu, double chain_score,
                                const ChainWeights& weights = {}, double band = fixing_band);

ChainEfficiency chain_efficiency(const Dataset& dataset, const NetworkTopology& topology,
                                 std::string_view dmu, const ChainWeights& weights = {});
ChainMpss chain_mpss(const Dataset& dataset, const NetworkTopology& topology, std::string_view dmu,
                     const ChainWeights& weights = {});
StageFactors profitability_mpss(const Dataset& dataset, const NetworkTopology& topology,
                                std::string_view dmu, double chain_score,
                                const ChainWeights& weights = {}, double band = fixing_band);

enum class Direction { decrease, increase, maintain };

const char* arrow(Direction d) noexcept;

struct TargetEntry {
  std::string measure;
  double current = 0;
  double appropriate = 0;
  double gap = 0;  // appropriate - current
  Direction direction = Direction::maintain;
};

struct TargetReport {
  std::vector<TargetEntry> entries;
  /// e.g. "Sales↓, Patents↑", or "maintain" when nothing moves.
  std::string strategy;
  bool alternative_optima = false;
};

inline constexpr double gap_epsilon = 1e-6;

/// Entries follow the order of `current`. A gap counts as a move when it
/// exceeds gap_epsilon times the current level. Throws ValidationError when
/// the measure sets differ.
TargetReport classify_strategy(const std::vector<std::pair<std::string, double>>& current,
                               const std::map<std::string, double>& appropriate);

TargetReport intermediate_targets(const ChainMatrices& data, Eigen::Index dmu,
                                  const ChainWeights& weights = {});
TargetReport intermediate_targets(const Dataset& dataset, const NetworkTopology& topology,
                                  std::string_view dmu, const ChainWeights& weights = {});

}  // namespace mpss
