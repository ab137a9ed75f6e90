#include "mpss/decomposition.hpp"

#include <algorithm>
#include <cmath>

namespace mpss {

namespace {

std::vector<std::string> concat(const std::vector<std::string>& a,
                                const std::vector<std::string>& b) {
  std::vector<std::string> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

bool is_pass_through(const ProcessSpec& p) {
  auto in = concat(p.exogenous_inputs, p.intermediate_inputs);
  auto out = concat(p.intermediate_outputs, p.final_outputs);
  if (in.empty()) return false;
  std::sort(in.begin(), in.end());
  std::sort(out.begin(), out.end());
  return in == out;
}

void check_weight(double w) {
  if (!(w >= 0.0 && w <= 1.0)) {
    throw ValidationError("tandem weight " + std::to_string(w) + " is outside [0, 1]");
  }
}

}  // namespace

TandemTopology to_tandem(const NetworkTopology& topology, std::array<double, 2> weights) {
  for (const auto& p : topology.processes) {
    if (is_pass_through(p)) {
      throw UnsupportedTopology("process '" + p.name + "' is a pass-through; already tandem");
    }
  }
  for (const double w : weights) check_weight(w);
  const TwoStageRoles roles = two_stage_roles(topology);
  const ProcessSpec* first = nullptr;
  const ProcessSpec* second = nullptr;
  for (const auto& p : topology.processes) (p.stage == 1 ? first : second) = &p;

  TandemTopology t;
  t.stages[0].real = {first->name, roles.stage1_inputs, concat(roles.stage1_outputs, roles.intermediates),
                      false};
  t.stages[1].real = {second->name, concat(roles.stage2_inputs, roles.intermediates),
                      roles.stage2_outputs, false};
  if (!roles.stage2_inputs.empty()) {
    t.stages[0].dummy = TandemProcess{"dummy1", roles.stage2_inputs, roles.stage2_inputs, true};
  }
  if (!roles.stage1_outputs.empty()) {
    t.stages[1].dummy = TandemProcess{"dummy2", roles.stage1_outputs, roles.stage1_outputs, true};
  }
  t.stages[0].weight = weights[0];
  t.stages[1].weight = weights[1];
  return t;
}

NetworkTopology to_network(const TandemTopology& tandem) {
  NetworkTopology net;
  net.shape = ShapeTag::two_stage_general;
  for (int s = 0; s < 2; ++s) {
    const TandemStage& stage = tandem.stages[static_cast<std::size_t>(s)];
    const double dummy_weight = stage.dummy ? 1.0 - stage.weight : 0.0;
    for (const TandemProcess* p : {&stage.real, stage.dummy ? &*stage.dummy : nullptr}) {
      if (!p) continue;
      ProcessSpec spec;
      spec.name = p->name;
      spec.stage = s + 1;
      spec.exogenous_inputs = p->inputs;
      spec.final_outputs = p->outputs;
      spec.importance_weight = p->dummy ? dummy_weight : (stage.dummy ? stage.weight : 1.0);
      net.processes.push_back(std::move(spec));
    }
  }
  return net;
}

namespace {

DecompositionReport combine(std::array<double, 2> process_scores, std::array<double, 2> weights) {
  DecompositionReport r;
  r.process_scores = process_scores;
  r.weights = weights;
  // The dummy process is MPSS by construction and contributes nothing.
  for (std::size_t i = 0; i < 2; ++i) r.stage_scores[i] = weights[i] * process_scores[i];
  r.tandem_score = r.stage_scores[0] + r.stage_scores[1];
  return r;
}

}  // namespace

DecompositionReport decompose(std::array<double, 2> process_scores, std::array<double, 2> weights) {
  for (const double s : process_scores) {
    if (!(s >= 0.0)) throw ValidationError("process MPSS score " + std::to_string(s) + " is negative");
  }
  for (const double w : weights) check_weight(w);
  return combine(process_scores, weights);
}

TandemEvaluation evaluate_tandem(const TwoStageMatrices& data, Eigen::Index dmu,
                                 std::array<double, 2> weights) {
  TandemEvaluation e;
  e.system = network_mpss_radial(data, dmu);
  e.stage1 = stage_mpss(data, dmu, e.system.score, 1);
  e.stage2 = stage_mpss(data, dmu, e.system.score, 2, e.stage1.score);
  for (const double w : weights) check_weight(w);
  // Lexicographic stage optima may be negative; report them as they are.
  e.decomposition = combine({e.stage1.score, e.stage2.score}, weights);
  e.additivity_gap = e.system.score - (e.stage1.score + e.stage2.score);
  return e;
}

TandemEvaluation evaluate_tandem(const Dataset& dataset, const NetworkTopology& topology,
                                 std::string_view dmu, std::array<double, 2> weights) {
  return evaluate_tandem(two_stage_matrices(dataset, two_stage_roles(topology)),
                         dataset.index_of(dmu), weights);
}

}  // namespace mpss
