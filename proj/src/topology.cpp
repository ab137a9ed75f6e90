#include "mpss/model_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

namespace mpss {

using nlohmann::json;

const char* to_string(ShapeTag shape) noexcept {
  switch (shape) {
    case ShapeTag::two_stage_general: return "two_stage_general";
    case ShapeTag::series_parallel_chain: return "series_parallel_chain";
  }
  return "unknown";
}

const ProcessSpec* NetworkTopology::find(std::string_view name) const {
  const auto it = std::find_if(processes.begin(), processes.end(),
                               [&](const ProcessSpec& p) { return p.name == name; });
  return it == processes.end() ? nullptr : &*it;
}

namespace {

bool contains(const std::vector<std::string>& list, std::string_view item) {
  return std::find(list.begin(), list.end(), item) != list.end();
}

void check_roles(const ProcessSpec& p) {
  std::map<std::string, const char*> role_of;
  const std::pair<const std::vector<std::string>*, const char*> roles[] = {
      {&p.exogenous_inputs, "exogenous_inputs"},
      {&p.intermediate_outputs, "intermediate_outputs"},
      {&p.intermediate_inputs, "intermediate_inputs"},
      {&p.final_outputs, "final_outputs"},
  };
  for (const auto& [list, label] : roles) {
    for (const auto& m : *list) {
      if (m.empty()) throw ValidationError("process '" + p.name + "' lists an empty measure name");
      const auto [it, inserted] = role_of.emplace(m, label);
      if (!inserted) {
        throw ValidationError("measure '" + m + "' plays more than one role in process '" +
                              p.name + "' (" + it->second + ", " + label + ")");
      }
    }
  }
}

void check_acyclic(const NetworkTopology& t) {
  std::map<std::string, std::vector<std::string>> next;
  for (const auto& l : t.links) next[l.from].push_back(l.to);
  std::map<std::string, int> state;  // 0 new, 1 on stack, 2 done
  std::function<void(const std::string&)> visit = [&](const std::string& node) {
    state[node] = 1;
    for (const auto& succ : next[node]) {
      if (state[succ] == 1) {
        throw ValidationError("links form a cycle through process '" + succ + "'");
      }
      if (state[succ] == 0) visit(succ);
    }
    state[node] = 2;
  };
  for (const auto& p : t.processes) {
    if (state[p.name] == 0) visit(p.name);
  }
}

std::vector<const ProcessSpec*> in_stage(const NetworkTopology& t, int stage) {
  std::vector<const ProcessSpec*> out;
  for (const auto& p : t.processes) {
    if (p.stage == stage) out.push_back(&p);
  }
  return out;
}

void check_two_stage(const NetworkTopology& t) {
  const auto first = in_stage(t, 1);
  const auto second = in_stage(t, 2);
  if (t.processes.size() != 2 || first.size() != 1 || second.size() != 1) {
    throw UnsupportedTopology("two_stage_general needs exactly one stage-1 and one stage-2 process");
  }
  const ProcessSpec& a = *first.front();
  const ProcessSpec& b = *second.front();
  if (a.exogenous_inputs.empty()) {
    throw UnsupportedTopology("stage-1 process '" + a.name + "' has no exogenous inputs");
  }
  if (a.intermediate_outputs.empty()) {
    throw UnsupportedTopology("stage-1 process '" + a.name + "' has no intermediate outputs");
  }
  if (!a.intermediate_inputs.empty() || !b.intermediate_outputs.empty()) {
    throw UnsupportedTopology("intermediates must flow from stage 1 to stage 2 only");
  }
  if (b.final_outputs.empty()) {
    throw UnsupportedTopology("stage-2 process '" + b.name + "' has no final outputs");
  }
  if (std::set(a.intermediate_outputs.begin(), a.intermediate_outputs.end()) !=
      std::set(b.intermediate_inputs.begin(), b.intermediate_inputs.end())) {
    throw UnsupportedTopology("stage-2 intermediate inputs must equal stage-1 intermediate outputs");
  }
}

void check_chain(const NetworkTopology& t) {
  const auto first = in_stage(t, 1);
  const auto second = in_stage(t, 2);
  if (t.processes.size() != 3 || first.size() != 2 || second.size() != 1) {
    throw UnsupportedTopology(
        "series_parallel_chain needs two parallel stage-1 processes and one stage-2 process");
  }
  std::set<std::string> produced;
  for (const ProcessSpec* p : first) {
    if (p->exogenous_inputs.empty() || p->intermediate_outputs.empty()) {
      throw UnsupportedTopology("stage-1 process '" + p->name +
                                "' needs exogenous inputs and intermediate outputs");
    }
    if (!p->intermediate_inputs.empty() || !p->final_outputs.empty()) {
      throw UnsupportedTopology("stage-1 process '" + p->name +
                                "' may not have intermediate inputs or final outputs");
    }
    produced.insert(p->intermediate_outputs.begin(), p->intermediate_outputs.end());
  }
  const ProcessSpec& market = *second.front();
  if (!market.exogenous_inputs.empty() || !market.intermediate_outputs.empty() ||
      market.final_outputs.empty()) {
    throw UnsupportedTopology("stage-2 process '" + market.name +
                              "' must consume only intermediates and produce final outputs");
  }
  if (produced != std::set(market.intermediate_inputs.begin(), market.intermediate_inputs.end())) {
    throw UnsupportedTopology("stage-2 intermediate inputs must equal the stage-1 intermediates");
  }
}

}  // namespace

void validate_structure(const NetworkTopology& t) {
  if (t.processes.empty()) throw ValidationError("topology has no processes");
  std::set<std::string> names;
  std::map<int, double> weight_sum;
  for (const auto& p : t.processes) {
    if (p.name.empty()) throw ValidationError("process with empty name");
    if (!names.insert(p.name).second) throw ValidationError("duplicate process '" + p.name + "'");
    if (p.stage < 1) {
      throw ValidationError("process '" + p.name + "' has stage " + std::to_string(p.stage) +
                            "; stages start at 1");
    }
    if (!(p.importance_weight >= 0.0 && p.importance_weight <= 1.0)) {
      throw ValidationError("process '" + p.name + "' importance_weight must lie in [0, 1]");
    }
    weight_sum[p.stage] += p.importance_weight;
    check_roles(p);
  }
  for (const auto& [stage, sum] : weight_sum) {
    if (std::abs(sum - 1.0) > 1e-9) {
      throw ValidationError("importance weights of stage " + std::to_string(stage) +
                            " sum to " + std::to_string(sum) + ", expected 1");
    }
  }

  std::set<std::string> has_incoming;
  std::set<std::pair<std::string, std::string>> linked;  // (process, measure)
  for (const auto& l : t.links) {
    const ProcessSpec* from = t.find(l.from);
    const ProcessSpec* to = t.find(l.to);
    if (!from) throw ValidationError("link source '" + l.from + "' is not a process");
    if (!to) throw ValidationError("link sink '" + l.to + "' is not a process");
    if (!contains(from->intermediate_outputs, l.measure)) {
      throw ValidationError("link measure '" + l.measure + "' is not an intermediate output of '" +
                            l.from + "'");
    }
    if (!contains(to->intermediate_inputs, l.measure)) {
      throw ValidationError("link measure '" + l.measure + "' is not an intermediate input of '" +
                            l.to + "'");
    }
    has_incoming.insert(l.to);
    linked.emplace(l.from, l.measure);
    linked.emplace(l.to, l.measure);
  }
  check_acyclic(t);
  for (const auto& p : t.processes) {
    if (!has_incoming.contains(p.name) && p.stage != 1) {
      throw ValidationError("process '" + p.name + "' has no incoming links but stage " +
                            std::to_string(p.stage));
    }
    for (const auto* list : {&p.intermediate_outputs, &p.intermediate_inputs}) {
      for (const auto& m : *list) {
        if (!linked.contains({p.name, m})) {
          throw ValidationError("intermediate '" + m + "' of process '" + p.name +
                                "' is not carried by any link");
        }
      }
    }
  }
  for (const auto& l : t.links) {
    if (t.find(l.to)->stage <= t.find(l.from)->stage) {
      throw ValidationError("link " + l.from + " -> " + l.to + " does not go to a later stage");
    }
  }

  switch (t.shape) {
    case ShapeTag::two_stage_general: check_two_stage(t); break;
    case ShapeTag::series_parallel_chain: check_chain(t); break;
  }
}

void validate(const NetworkTopology& t, const Dataset& dataset) {
  validate_structure(t);
  for (const auto& p : t.processes) {
    for (const auto* list : {&p.exogenous_inputs, &p.intermediate_outputs, &p.intermediate_inputs,
                             &p.final_outputs}) {
      for (const auto& m : *list) {
        if (!dataset.has_measure(m)) {
          throw ValidationError("process '" + p.name + "' references measure '" + m +
                                "' which is not a data column");
        }
      }
    }
  }
}

TwoStageRoles two_stage_roles(const NetworkTopology& t) {
  if (t.shape != ShapeTag::two_stage_general) {
    throw UnsupportedTopology(std::string("expected two_stage_general, got ") + to_string(t.shape));
  }
  validate_structure(t);
  const ProcessSpec& a = *in_stage(t, 1).front();
  const ProcessSpec& b = *in_stage(t, 2).front();
  return {a.exogenous_inputs, a.intermediate_outputs, a.final_outputs, b.exogenous_inputs,
          b.final_outputs};
}

ChainRoles chain_roles(const NetworkTopology& t) {
  if (t.shape != ShapeTag::series_parallel_chain) {
    throw UnsupportedTopology(std::string("expected series_parallel_chain, got ") +
                              to_string(t.shape));
  }
  validate_structure(t);
  const auto first = in_stage(t, 1);
  const ProcessSpec& op = *first[0];
  const ProcessSpec& rd = *first[1];
  const ProcessSpec& market = *in_stage(t, 2).front();
  return {op.name,
          rd.name,
          market.name,
          op.exogenous_inputs,
          rd.exogenous_inputs,
          op.intermediate_outputs,
          rd.intermediate_outputs,
          market.final_outputs};
}

BlackBoxRoles black_box_roles(const NetworkTopology& t) {
  validate_structure(t);
  BlackBoxRoles roles;
  for (const auto& p : t.processes) {
    for (const auto& m : p.exogenous_inputs) {
      if (!contains(roles.inputs, m)) roles.inputs.push_back(m);
    }
    for (const auto& m : p.final_outputs) {
      if (!contains(roles.outputs, m)) roles.outputs.push_back(m);
    }
  }
  return roles;
}

namespace {

std::vector<std::string> string_list(const json& node, const char* key, const std::string& owner) {
  if (!node.contains(key)) return {};
  const json& arr = node.at(key);
  if (!arr.is_array()) throw ValidationError(owner + ": '" + key + "' must be an array");
  std::vector<std::string> out;
  for (const auto& item : arr) {
    if (!item.is_string()) throw ValidationError(owner + ": '" + key + "' must hold strings");
    out.push_back(item.get<std::string>());
  }
  return out;
}

std::string required_string(const json& node, const char* key, const std::string& owner) {
  if (!node.contains(key) || !node.at(key).is_string()) {
    throw ValidationError(owner + ": missing string field '" + key + "'");
  }
  return node.at(key).get<std::string>();
}

}  // namespace

NetworkTopology parse_topology_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("topology is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("topology must be a JSON object");

  NetworkTopology t;
  const std::string shape = required_string(doc, "shape", "topology");
  if (shape == "two_stage_general") {
    t.shape = ShapeTag::two_stage_general;
  } else if (shape == "series_parallel_chain") {
    t.shape = ShapeTag::series_parallel_chain;
  } else {
    throw UnsupportedTopology("shape '" + shape + "'");
  }

  if (!doc.contains("processes") || !doc.at("processes").is_array()) {
    throw ValidationError("topology: 'processes' must be an array");
  }
  std::vector<bool> weight_given;
  for (const auto& node : doc.at("processes")) {
    if (!node.is_object()) throw ValidationError("topology: process entries must be objects");
    ProcessSpec p;
    p.name = required_string(node, "name", "process");
    const std::string owner = "process '" + p.name + "'";
    if (!node.contains("stage") || !node.at("stage").is_number_integer()) {
      throw ValidationError(owner + ": missing integer field 'stage'");
    }
    p.stage = node.at("stage").get<int>();
    p.exogenous_inputs = string_list(node, "exogenous_inputs", owner);
    p.intermediate_outputs = string_list(node, "intermediate_outputs", owner);
    p.intermediate_inputs = string_list(node, "intermediate_inputs", owner);
    p.final_outputs = string_list(node, "final_outputs", owner);
    const bool given = node.contains("importance_weight");
    if (given) {
      if (!node.at("importance_weight").is_number()) {
        throw ValidationError(owner + ": 'importance_weight' must be a number");
      }
      p.importance_weight = node.at("importance_weight").get<double>();
    }
    weight_given.push_back(given);
    t.processes.push_back(std::move(p));
  }
  // Missing weights default to an equal share of the stage.
  std::map<int, int> per_stage;
  for (const auto& p : t.processes) ++per_stage[p.stage];
  for (std::size_t i = 0; i < t.processes.size(); ++i) {
    if (!weight_given[i]) t.processes[i].importance_weight = 1.0 / per_stage[t.processes[i].stage];
  }

  if (doc.contains("links")) {
    if (!doc.at("links").is_array()) throw ValidationError("topology: 'links' must be an array");
    for (const auto& node : doc.at("links")) {
      if (!node.is_object()) throw ValidationError("topology: link entries must be objects");
      t.links.push_back({required_string(node, "from", "link"), required_string(node, "to", "link"),
                         required_string(node, "measure", "link")});
    }
  }
  return t;
}

NetworkTopology read_topology_json(const std::filesystem::path& path) {
  return parse_topology_json(read_text_file(path));
}

std::string to_json(const NetworkTopology& t) {
  json doc;
  doc["shape"] = to_string(t.shape);
  doc["processes"] = json::array();
  for (const auto& p : t.processes) {
    doc["processes"].push_back({{"name", p.name},
                                {"stage", p.stage},
                                {"exogenous_inputs", p.exogenous_inputs},
                                {"intermediate_outputs", p.intermediate_outputs},
                                {"intermediate_inputs", p.intermediate_inputs},
                                {"final_outputs", p.final_outputs},
                                {"importance_weight", p.importance_weight}});
  }
  doc["links"] = json::array();
  for (const auto& l : t.links) {
    doc["links"].push_back({{"from", l.from}, {"to", l.to}, {"measure", l.measure}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace mpss
