#include "mpss/chain.hpp"

#include "builder.hpp"

#include <cmath>
#include <set>

namespace mpss {

using detail::LpBuilder;
using Eigen::Index;

void ChainWeights::validate() const {
  for (const double w : {w1, w2, w3}) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw ValidationError("chain weights must be finite and nonnegative");
    }
  }
}

bool ChainEfficiency::efficient(const ChainWeights& w, double eps) const noexcept {
  return std::abs(objective - (w.w1 + w.w2 - w.w3)) <= eps;
}

ChainMatrices chain_matrices(const Dataset& dataset, const ChainRoles& roles) {
  return {dataset.rows(roles.operation_inputs),        dataset.rows(roles.rd_inputs),
          dataset.rows(roles.operation_intermediates), dataset.rows(roles.rd_intermediates),
          dataset.rows(roles.final_outputs),           roles.operation_intermediates,
          roles.rd_intermediates};
}

namespace {

void check(const ChainMatrices& d, Index o) {
  const Index n = d.dmus();
  for (const auto* m : {&d.xr, &d.zo, &d.zr, &d.y}) {
    if (m->cols() != n) throw ValidationError("measure matrices disagree on the number of DMUs");
  }
  for (const auto* m : {&d.xo, &d.xr, &d.zo, &d.zr, &d.y}) {
    if (m->rows() == 0) throw ValidationError("every chain role needs at least one measure");
  }
  if (o < 0 || o >= n) throw UnknownDmu("#" + std::to_string(o));
}

std::string name_of(const std::vector<std::string>& names, Index i, const char* fallback) {
  return static_cast<std::size_t>(i) < names.size() ? names[static_cast<std::size_t>(i)]
                                                    : fallback + std::to_string(i + 1);
}

// Shared layout of the efficiency and MPSS models (free targets).
struct TargetModel {
  LpBuilder b;
  Index op, rd, market, lambda, mu, phi, zo_target, zr_target;

  TargetModel(const ChainMatrices& d, Sense sense) : b(sense) {
    const Index n = d.dmus();
    op = b.variable("theta_o");
    rd = b.variable("theta_r");
    market = b.variable("theta_m");
    lambda = b.block("lambda", n);
    mu = b.block("mu", n);
    phi = b.block("phi", n);
    zo_target = b.block("zo_target", d.zo.rows());
    zr_target = b.block("zr_target", d.zr.rows());
  }

  void rows(const ChainMatrices& d, Index o) {
    const Index n = d.dmus();
    b.envelopment(lambda, d.xo, op, d.xo.col(o), Relation::less_equal);
    b.against_targets(lambda, d.zo, zo_target, Relation::greater_equal);
    b.convexity(lambda, n);
    b.envelopment(mu, d.xr, rd, d.xr.col(o), Relation::less_equal);
    b.against_targets(mu, d.zr, zr_target, Relation::greater_equal);
    b.convexity(mu, n);
    b.against_targets(phi, d.zo, zo_target, Relation::less_equal);
    b.against_targets(phi, d.zr, zr_target, Relation::less_equal);
    b.envelopment(phi, d.y, market, d.y.col(o), Relation::greater_equal);
    b.convexity(phi, n);
  }

  std::map<std::string, double> targets(const ChainMatrices& d, const LpSolutiond& s) const {
    std::map<std::string, double> out;
    for (Index i = 0; i < d.zo.rows(); ++i) {
      out[name_of(d.operation_intermediates, i, "zo")] = s.variable_values(zo_target + i);
    }
    for (Index i = 0; i < d.zr.rows(); ++i) {
      out[name_of(d.rd_intermediates, i, "zr")] = s.variable_values(zr_target + i);
    }
    return out;
  }

  bool targets_ambiguous(const ChainMatrices& d, const LpSolutiond& s) const {
    return detail::any_flagged(s, zo_target, d.zo.rows() + d.zr.rows());
  }
};

}  // namespace

ChainEfficiency chain_efficiency(const ChainMatrices& d, Index o, const ChainWeights& w) {
  check(d, o);
  w.validate();
  TargetModel m(d, Sense::minimize);
  m.b.cost(m.op, w.w1);
  m.b.cost(m.rd, w.w2);
  m.b.cost(m.market, -w.w3);
  m.rows(d, o);
  m.b.row(Eigen::VectorXd::Unit(m.b.size(), m.op), Relation::less_equal, 1.0);
  m.b.row(Eigen::VectorXd::Unit(m.b.size(), m.rd), Relation::less_equal, 1.0);
  m.b.row(Eigen::VectorXd::Unit(m.b.size(), m.market), Relation::greater_equal, 1.0);
  const LpSolutiond s = detail::solve_or_throw(m.b.problem(), "chain efficiency");

  ChainEfficiency r;
  r.theta_o = s.variable_values(m.op);
  r.theta_r = s.variable_values(m.rd);
  r.theta_m = s.variable_values(m.market);
  r.marketability_efficiency = 1.0 / r.theta_m;
  r.objective = s.objective_value;
  r.intermediates = m.targets(d, s);
  r.alternative_optima = m.targets_ambiguous(d, s);
  return r;
}

ChainMpss chain_mpss(const ChainMatrices& d, Index o, const ChainWeights& w) {
  check(d, o);
  w.validate();
  TargetModel m(d, Sense::maximize);
  m.b.cost(m.market, w.w1);
  m.b.cost(m.op, -w.w2);
  m.b.cost(m.rd, -w.w3);
  m.rows(d, o);
  const LpSolutiond s = detail::solve_or_throw(m.b.problem(), "chain MPSS");

  ChainMpss r;
  r.score = s.objective_value;
  r.theta_o = s.variable_values(m.op);
  r.theta_r = s.variable_values(m.rd);
  r.theta_m = s.variable_values(m.market);
  r.intermediates = m.targets(d, s);
  const Index n = d.dmus();
  r.reference_weights = {s.variable_values.segment(m.lambda, n), s.variable_values.segment(m.mu, n),
                         s.variable_values.segment(m.phi, n)};
  r.alternative_optima = m.targets_ambiguous(d, s);
  return r;
}

StageFactors profitability_mpss(const ChainMatrices& d, Index o, double chain_score,
                                const ChainWeights& w, double band) {
  check(d, o);
  w.validate();
  const Index n = d.dmus();
  LpBuilder b(Sense::maximize);
  const Index t1 = b.variable("theta1");
  const Index t2 = b.variable("theta2");
  const Index t3 = b.variable("theta3");
  const Index t4 = b.variable("theta4");
  const Index tm = b.variable("theta_m");
  const Index lambda = b.block("lambda", n);
  const Index mu = b.block("mu", n);
  const Index phi = b.block("phi", n);
  b.cost(t2, 1.0);
  b.cost(t1, -1.0);
  b.cost(t4, 1.0);
  b.cost(t3, -1.0);
  b.envelopment(lambda, d.xo, t1, d.xo.col(o), Relation::less_equal);
  b.envelopment(lambda, d.zo, t2, d.zo.col(o), Relation::greater_equal);
  b.convexity(lambda, n);
  b.envelopment(mu, d.xr, t3, d.xr.col(o), Relation::less_equal);
  b.envelopment(mu, d.zr, t4, d.zr.col(o), Relation::greater_equal);
  b.convexity(mu, n);
  b.envelopment(phi, d.zo, t2, d.zo.col(o), Relation::less_equal);
  b.envelopment(phi, d.zr, t4, d.zr.col(o), Relation::less_equal);
  b.envelopment(phi, d.y, tm, d.y.col(o), Relation::greater_equal);
  b.convexity(phi, n);
  Eigen::VectorXd fixed = b.zeros();
  fixed(tm) = w.w1;
  fixed(t1) = -w.w2;
  fixed(t3) = -w.w3;
  b.band(fixed, chain_score, band);

  const LpSolutiond s = solve_lp(b.problem());
  if (!s.optimal()) {
    throw SolverError(std::string("profitability MPSS: chain score cannot be held (LP ") +
                      to_string(s.status) + ")");
  }
  const auto& v = s.variable_values;
  StageFactors f;
  f.theta1 = v(t1);
  f.theta2 = v(t2);
  f.theta3 = v(t3);
  f.theta4 = v(t4);
  f.theta_m = v(tm);
  f.operation_mpss = f.theta2 - f.theta1;
  f.rd_mpss = f.theta4 - f.theta3;
  f.profitability_mpss = f.operation_mpss + f.rd_mpss;
  f.marketability_mpss = chain_score - f.profitability_mpss;
  return f;
}

ChainEfficiency chain_efficiency(const Dataset& dataset, const NetworkTopology& topology,
                                 std::string_view dmu, const ChainWeights& weights) {
  return chain_efficiency(chain_matrices(dataset, chain_roles(topology)), dataset.index_of(dmu),
                          weights);
}

ChainMpss chain_mpss(const Dataset& dataset, const NetworkTopology& topology, std::string_view dmu,
                     const ChainWeights& weights) {
  return chain_mpss(chain_matrices(dataset, chain_roles(topology)), dataset.index_of(dmu), weights);
}

StageFactors profitability_mpss(const Dataset& dataset, const NetworkTopology& topology,
                                std::string_view dmu, double chain_score,
                                const ChainWeights& weights, double band) {
  return profitability_mpss(chain_matrices(dataset, chain_roles(topology)), dataset.index_of(dmu),
                            chain_score, weights, band);
}

const char* arrow(Direction d) noexcept {
  switch (d) {
    case Direction::decrease: return "↓";
    case Direction::increase: return "↑";
    case Direction::maintain: return "";
  }
  return "";
}

TargetReport classify_strategy(const std::vector<std::pair<std::string, double>>& current,
                               const std::map<std::string, double>& appropriate) {
  std::set<std::string> keys;
  for (const auto& [name, value] : current) {
    if (!keys.insert(name).second) throw ValidationError("measure '" + name + "' listed twice");
    if (!appropriate.contains(name)) {
      throw ValidationError("no appropriate level for measure '" + name + "'");
    }
  }
  for (const auto& [name, value] : appropriate) {
    if (!keys.contains(name)) throw ValidationError("no current level for measure '" + name + "'");
  }

  TargetReport r;
  for (const auto& [name, now] : current) {
    TargetEntry e;
    e.measure = name;
    e.current = now;
    e.appropriate = appropriate.at(name);
    e.gap = e.appropriate - e.current;
    const double eps = gap_epsilon * std::abs(e.current);
    e.direction = e.gap < -eps ? Direction::decrease
                  : e.gap > eps ? Direction::increase
                                : Direction::maintain;
    if (e.direction != Direction::maintain) {
      if (!r.strategy.empty()) r.strategy += ", ";
      r.strategy += name + arrow(e.direction);
    }
    r.entries.push_back(std::move(e));
  }
  if (r.strategy.empty()) r.strategy = "maintain";
  return r;
}

TargetReport intermediate_targets(const ChainMatrices& d, Index o, const ChainWeights& w) {
  const ChainMpss m = chain_mpss(d, o, w);
  std::vector<std::pair<std::string, double>> current;
  for (Index i = 0; i < d.zo.rows(); ++i) {
    current.emplace_back(name_of(d.operation_intermediates, i, "zo"), d.zo(i, o));
  }
  for (Index i = 0; i < d.zr.rows(); ++i) {
    current.emplace_back(name_of(d.rd_intermediates, i, "zr"), d.zr(i, o));
  }
  TargetReport r = classify_strategy(current, m.intermediates);
  r.alternative_optima = m.alternative_optima;
  return r;
}

TargetReport intermediate_targets(const Dataset& dataset, const NetworkTopology& topology,
                                  std::string_view dmu, const ChainWeights& weights) {
  return intermediate_targets(chain_matrices(dataset, chain_roles(topology)),
                              dataset.index_of(dmu), weights);
}

}  // namespace mpss
