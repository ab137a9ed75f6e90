#pragma once

// Synthetic oracle instances converted to library inputs.

#include "synthetic.hpp"

#include "mpss/chain.hpp"
#include "mpss/network.hpp"

namespace oracle {

inline mpss::TwoStageMatrices to_library(const TwoStageData& d) {
  return {d.x1, d.z, d.y1, d.x2, d.y2, {}};
}

inline mpss::ChainMatrices to_library(const ChainData& d) { return {d.xo, d.xr, d.zo, d.zr, d.y, {}, {}}; }

/// Same instance as a Dataset plus two-stage topology, with measure names
/// x1_1.., z_1.., y1_1.., x2_1.., y2_1.. and DMU ids d1...
inline std::pair<mpss::Dataset, mpss::NetworkTopology> to_dataset(const TwoStageData& d) {
  std::vector<std::string> ids;
  for (Eigen::Index j = 0; j < d.dmus(); ++j) ids.push_back("d" + std::to_string(j + 1));
  mpss::Dataset ds(ids);
  mpss::ProcessSpec a{"first", 1, {}, {}, {}, {}, 1.0};
  mpss::ProcessSpec b{"second", 2, {}, {}, {}, {}, 1.0};
  mpss::NetworkTopology t;
  const auto add = [&](const Eigen::MatrixXd& m, const std::string& prefix,
                       std::vector<std::string>& list) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const std::string name = prefix + std::to_string(i + 1);
      ds.add_measure(name, m.row(i).transpose());
      list.push_back(name);
    }
  };
  add(d.x1, "x1_", a.exogenous_inputs);
  add(d.z, "z_", a.intermediate_outputs);
  add(d.y1, "y1_", a.final_outputs);
  add(d.x2, "x2_", b.exogenous_inputs);
  add(d.y2, "y2_", b.final_outputs);
  b.intermediate_inputs = a.intermediate_outputs;
  for (const auto& z : a.intermediate_outputs) t.links.push_back({"first", "second", z});
  t.processes = {a, b};
  t.shape = mpss::ShapeTag::two_stage_general;
  return {ds, t};
}

}  // namespace oracle
