#pragma once

// Tandem (series-of-parallel) view of a two-stage network and the additive
// MPSS decomposition over it.
//
// A general two-stage network becomes a two-stage tandem by adding a
// pass-through process beside each real process: dummy 1 carries the
// stage-2 exogenous inputs past stage 1, dummy 2 carries the stage-1 final
// outputs past stage 2. A pass-through consumes exactly what it emits, so
// its MPSS is zero and each tandem stage score is the real process score
// times its weight.

#include "mpss/model_io.hpp"
#include "mpss/network.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace mpss {

struct TandemProcess {
  std::string name;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  bool dummy = false;
};

struct TandemStage {
  TandemProcess real;
  /// Absent when there is nothing to carry past this stage.
  std::optional<TandemProcess> dummy;
  /// Weight of the real process; the dummy takes 1 - weight.
  double weight = 0.5;
};

struct TandemTopology {
  std::array<TandemStage, 2> stages;
};

/// Throws UnsupportedTopology for non two-stage shapes and for a topology
/// that already contains pass-through processes.
TandemTopology to_tandem(const NetworkTopology& topology,
                         std::array<double, 2> weights = {0.5, 0.5});

/// The tandem written back as a process graph (dummies included).
NetworkTopology to_network(const TandemTopology& tandem);

struct DecompositionReport {
  std::array<double, 2> process_scores{};
  std::array<double, 2> stage_scores{};
  double tandem_score = 0;
  std::array<double, 2> weights{0.5, 0.5};
};

/// stage_i = weight_i * process_i, tandem = stage_1 + stage_2. Throws
/// ValidationError on a negative score or a weight outside [0, 1].
DecompositionReport decompose(std::array<double, 2> process_scores,
                              std::array<double, 2> weights = {0.5, 0.5});

/// System, lexicographic process scores and their decomposition for one DMU.
struct TandemEvaluation {
  MpssResult system;
  MpssResult stage1;
  MpssResult stage2;
  DecompositionReport decomposition;
  /// system score - (process_1 + process_2). Not assumed to vanish.
  double additivity_gap = 0;
};

TandemEvaluation evaluate_tandem(const TwoStageMatrices& data, Eigen::Index dmu,
                                 std::array<double, 2> weights = {0.5, 0.5});
TandemEvaluation evaluate_tandem(const Dataset& dataset, const NetworkTopology& topology,
                                 std::string_view dmu, std::array<double, 2> weights = {0.5, 0.5});

}  // namespace mpss
