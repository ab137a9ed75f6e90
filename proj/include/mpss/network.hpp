#pragma once

// Black-box and two-stage network MPSS models.
//
// Every model maximizes an output expansion factor minus an input
// contraction factor over a convex (VRS) reference set. Choosing the
// evaluated DMU itself as the reference with all factors at one is always
// feasible, so scores are nonnegative and a score of zero marks MPSS.

#include "mpss/model_io.hpp"

#include <Eigen/Dense>

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mpss {

inline constexpr double mpss_epsilon = 1e-6;
inline constexpr double fixing_band = 1e-6;

enum class MpssScope { black_box, system_variable, system_radial, stage1, stage2 };

const char* to_string(MpssScope scope) noexcept;

struct MpssResult {
  MpssScope scope = MpssScope::black_box;
  double score = 0;
  /// Keys: input/output for the black box; stage1_input, stage1_output,
  /// stage2_input, stage2_output for the network models.
  std::map<std::string, double> scale_factors;
  /// One lambda vector per stage.
  std::vector<Eigen::VectorXd> reference_weights;
  /// Free intermediate targets (system_variable only).
  std::map<std::string, double> optimal_intermediates;
  /// The solver found a zero-reduced-cost direction on the reported values.
  bool alternative_optima = false;

  bool is_mpss(double eps = mpss_epsilon) const noexcept { return score <= eps && score >= -eps; }
};

/// Measure matrices of a two-stage network; rows are measures, columns DMUs.
struct TwoStageMatrices {
  Eigen::MatrixXd x1, z, y1, x2, y2;
  std::vector<std::string> intermediate_names;

  Eigen::Index dmus() const noexcept { return x1.cols(); }
};

TwoStageMatrices two_stage_matrices(const Dataset& dataset, const TwoStageRoles& roles);

MpssResult blackbox_mpss(const Eigen::Ref<const Eigen::MatrixXd>& inputs,
                         const Eigen::Ref<const Eigen::MatrixXd>& outputs, Eigen::Index dmu);
MpssResult network_mpss_variable(const TwoStageMatrices& data, Eigen::Index dmu);
MpssResult network_mpss_radial(const TwoStageMatrices& data, Eigen::Index dmu);

/// Lexicographic stage scores: the system value (and for stage 2 the
/// stage-1 value) is held within +-band while the stage objective is
/// maximized. Throws SolverError when the band cannot be met.
MpssResult stage_mpss(const TwoStageMatrices& data, Eigen::Index dmu, double system_score,
                      int stage, std::optional<double> stage1_score = std::nullopt,
                      double band = fixing_band);

MpssResult blackbox_mpss(const Dataset& dataset, const BlackBoxRoles& roles, std::string_view dmu);
MpssResult blackbox_mpss(const Dataset& dataset, const NetworkTopology& topology,
                         std::string_view dmu);
MpssResult network_mpss_variable(const Dataset& dataset, const NetworkTopology& topology,
                                 std::string_view dmu);
MpssResult network_mpss_radial(const Dataset& dataset, const NetworkTopology& topology,
                               std::string_view dmu);
MpssResult stage_mpss(const Dataset& dataset, const NetworkTopology& topology, std::string_view dmu,
                      double system_score, int stage,
                      std::optional<double> stage1_score = std::nullopt,
                      double band = fixing_band);

}  // namespace mpss
