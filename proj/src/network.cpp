#include "mpss/network.hpp"

#include "builder.hpp"

namespace mpss {

using detail::LpBuilder;
using Eigen::Index;

const char* to_string(MpssScope scope) noexcept {
  switch (scope) {
    case MpssScope::black_box: return "black_box";
    case MpssScope::system_variable: return "system_variable";
    case MpssScope::system_radial: return "system_radial";
    case MpssScope::stage1: return "stage1";
    case MpssScope::stage2: return "stage2";
  }
  return "unknown";
}

TwoStageMatrices two_stage_matrices(const Dataset& dataset, const TwoStageRoles& roles) {
  return {dataset.rows(roles.stage1_inputs),  dataset.rows(roles.intermediates),
          dataset.rows(roles.stage1_outputs), dataset.rows(roles.stage2_inputs),
          dataset.rows(roles.stage2_outputs), roles.intermediates};
}

namespace {

void check_dmu(Index dmu, Index n) {
  if (dmu < 0 || dmu >= n) throw UnknownDmu("#" + std::to_string(dmu));
}

void check_shape(const TwoStageMatrices& d) {
  const Index n = d.dmus();
  for (const auto* m : {&d.z, &d.y1, &d.x2, &d.y2}) {
    if (m->cols() != n) throw ValidationError("measure matrices disagree on the number of DMUs");
  }
  if (d.x1.rows() == 0 || d.z.rows() == 0 || d.y2.rows() == 0) {
    throw ValidationError("two-stage model needs stage-1 inputs, intermediates and final outputs");
  }
}

// Variables shared by the two network formulations.
struct Network {
  LpBuilder b{Sense::maximize};
  Index in1, out1, in2, out2, lambda1, lambda2;
  Index targets = -1;

  Network(const TwoStageMatrices& d, bool variable) {
    in1 = b.variable("theta1_1");
    out1 = b.variable("theta2_1");
    in2 = b.variable("theta1_2");
    out2 = b.variable("theta2_2");
    lambda1 = b.block("lambda1", d.dmus());
    lambda2 = b.block("lambda2", d.dmus());
    if (variable) targets = b.block("z_target", d.z.rows());
  }

  Eigen::VectorXd difference(Index plus, Index minus) const {
    Eigen::VectorXd e = b.zeros();
    e(plus) = 1.0;
    e(minus) = -1.0;
    return e;
  }
};

void radial_rows(Network& m, const TwoStageMatrices& d, Index o) {
  m.b.envelopment(m.lambda1, d.x1, m.in1, d.x1.col(o), Relation::less_equal);
  m.b.envelopment(m.lambda1, d.z, m.out1, d.z.col(o), Relation::greater_equal);
  m.b.envelopment(m.lambda1, d.y1, m.out1, d.y1.col(o), Relation::greater_equal);
  m.b.envelopment(m.lambda2, d.z, m.in2, d.z.col(o), Relation::less_equal);
  m.b.envelopment(m.lambda2, d.x2, m.in2, d.x2.col(o), Relation::less_equal);
  m.b.envelopment(m.lambda2, d.y2, m.out2, d.y2.col(o), Relation::greater_equal);
  m.b.convexity(m.lambda1, d.dmus());
  m.b.convexity(m.lambda2, d.dmus());
}

MpssResult network_result(const Network& m, const LpSolutiond& s, MpssScope scope, Index n) {
  MpssResult r;
  r.scope = scope;
  r.score = s.objective_value;
  const auto& v = s.variable_values;
  r.scale_factors = {{"stage1_input", v(m.in1)},
                     {"stage1_output", v(m.out1)},
                     {"stage2_input", v(m.in2)},
                     {"stage2_output", v(m.out2)}};
  r.reference_weights = {v.segment(m.lambda1, n), v.segment(m.lambda2, n)};
  r.alternative_optima = detail::any_flagged(s, 0, v.size());
  return r;
}

}  // namespace

MpssResult blackbox_mpss(const Eigen::Ref<const Eigen::MatrixXd>& inputs,
                         const Eigen::Ref<const Eigen::MatrixXd>& outputs, Index dmu) {
  const Index n = inputs.cols();
  if (outputs.cols() != n) throw ValidationError("inputs and outputs disagree on the DMU count");
  if (inputs.rows() == 0 || outputs.rows() == 0) {
    throw ValidationError("black-box model needs at least one input and one output");
  }
  check_dmu(dmu, n);
  const Eigen::MatrixXd x = inputs, y = outputs;

  LpBuilder b(Sense::maximize);
  const Index in = b.variable("theta1");
  const Index out = b.variable("theta2");
  const Index lambda = b.block("lambda", n);
  b.cost(out, 1.0);
  b.cost(in, -1.0);
  b.envelopment(lambda, x, in, x.col(dmu), Relation::less_equal);
  b.envelopment(lambda, y, out, y.col(dmu), Relation::greater_equal);
  b.convexity(lambda, n);
  const LpSolutiond s = detail::solve_or_throw(b.problem(), "black-box MPSS");

  MpssResult r;
  r.scope = MpssScope::black_box;
  r.score = s.objective_value;
  r.scale_factors = {{"input", s.variable_values(in)}, {"output", s.variable_values(out)}};
  r.reference_weights = {s.variable_values.segment(lambda, n)};
  r.alternative_optima = detail::any_flagged(s, 0, s.variable_values.size());
  return r;
}

MpssResult network_mpss_variable(const TwoStageMatrices& d, Index o) {
  check_shape(d);
  check_dmu(o, d.dmus());
  Network m(d, true);
  m.b.cost(m.out2, 1.0);
  m.b.cost(m.in1, -1.0);
  m.b.envelopment(m.lambda1, d.x1, m.in1, d.x1.col(o), Relation::less_equal);
  m.b.against_targets(m.lambda1, d.z, m.targets, Relation::greater_equal);
  m.b.envelopment(m.lambda1, d.y1, m.out1, d.y1.col(o), Relation::greater_equal);
  m.b.against_targets(m.lambda2, d.z, m.targets, Relation::less_equal);
  m.b.envelopment(m.lambda2, d.x2, m.in2, d.x2.col(o), Relation::less_equal);
  m.b.envelopment(m.lambda2, d.y2, m.out2, d.y2.col(o), Relation::greater_equal);
  m.b.convexity(m.lambda1, d.dmus());
  m.b.convexity(m.lambda2, d.dmus());
  const LpSolutiond s = detail::solve_or_throw(m.b.problem(), "network MPSS (variable)");

  MpssResult r = network_result(m, s, MpssScope::system_variable, d.dmus());
  for (Index i = 0; i < d.z.rows(); ++i) {
    const std::string name = static_cast<std::size_t>(i) < d.intermediate_names.size()
                                 ? d.intermediate_names[static_cast<std::size_t>(i)]
                                 : "z" + std::to_string(i + 1);
    r.optimal_intermediates[name] = s.variable_values(m.targets + i);
  }
  r.alternative_optima = detail::any_flagged(s, m.targets, d.z.rows());
  return r;
}

MpssResult network_mpss_radial(const TwoStageMatrices& d, Index o) {
  check_shape(d);
  check_dmu(o, d.dmus());
  Network m(d, false);
  m.b.cost(m.out2, 1.0);
  m.b.cost(m.in1, -1.0);
  radial_rows(m, d, o);
  const LpSolutiond s = detail::solve_or_throw(m.b.problem(), "network MPSS (radial)");
  return network_result(m, s, MpssScope::system_radial, d.dmus());
}

MpssResult stage_mpss(const TwoStageMatrices& d, Index o, double system_score, int stage,
                      std::optional<double> stage1_score, double band) {
  if (stage != 1 && stage != 2) throw ValidationError("stage must be 1 or 2");
  if (stage == 2 && !stage1_score) throw ValidationError("stage 2 needs the stage-1 score");
  check_shape(d);
  check_dmu(o, d.dmus());
  Network m(d, false);
  if (stage == 1) {
    m.b.cost(m.out1, 1.0);
    m.b.cost(m.in1, -1.0);
  } else {
    m.b.cost(m.out2, 1.0);
    m.b.cost(m.in2, -1.0);
  }
  radial_rows(m, d, o);
  m.b.band(m.difference(m.out2, m.in1), system_score, band);
  if (stage == 2) m.b.band(m.difference(m.out1, m.in1), *stage1_score, band);

  const LpSolutiond s = solve_lp(m.b.problem());
  if (!s.optimal()) {
    throw SolverError("stage " + std::to_string(stage) + " MPSS: fixing band cannot be met (LP " +
                      to_string(s.status) + ")");
  }
  return network_result(m, s, stage == 1 ? MpssScope::stage1 : MpssScope::stage2, d.dmus());
}

MpssResult blackbox_mpss(const Dataset& dataset, const BlackBoxRoles& roles, std::string_view dmu) {
  return blackbox_mpss(dataset.rows(roles.inputs), dataset.rows(roles.outputs),
                       dataset.index_of(dmu));
}

MpssResult blackbox_mpss(const Dataset& dataset, const NetworkTopology& topology,
                         std::string_view dmu) {
  return blackbox_mpss(dataset, black_box_roles(topology), dmu);
}

MpssResult network_mpss_variable(const Dataset& dataset, const NetworkTopology& topology,
                                 std::string_view dmu) {
  return network_mpss_variable(two_stage_matrices(dataset, two_stage_roles(topology)),
                               dataset.index_of(dmu));
}

MpssResult network_mpss_radial(const Dataset& dataset, const NetworkTopology& topology,
                               std::string_view dmu) {
  return network_mpss_radial(two_stage_matrices(dataset, two_stage_roles(topology)),
                             dataset.index_of(dmu));
}

MpssResult stage_mpss(const Dataset& dataset, const NetworkTopology& topology, std::string_view dmu,
                      double system_score, int stage, std::optional<double> stage1_score,
                      double band) {
  return stage_mpss(two_stage_matrices(dataset, two_stage_roles(topology)), dataset.index_of(dmu),
                    system_score, stage, stage1_score, band);
}

}  // namespace mpss
