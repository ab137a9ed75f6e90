#pragma once

// Small helper for laying out envelopment-form LPs: named scalar variables
// followed by per-DMU weight blocks. All variables must be declared before
// the first row is added.

#include "mpss/errors.hpp"
#include "mpss/lp.hpp"

#include <string>

namespace mpss::detail {

class LpBuilder {
 public:
  using Index = Eigen::Index;

  explicit LpBuilder(Sense sense) { problem_.sense = sense; }

  Index variable(std::string name) {
    problem_.variable_names.push_back(std::move(name));
    return static_cast<Index>(problem_.variable_names.size()) - 1;
  }

  /// n consecutive variables prefix[0..n); returns the first index.
  Index block(const std::string& prefix, Index n) {
    const auto first = static_cast<Index>(problem_.variable_names.size());
    for (Index j = 0; j < n; ++j) variable(prefix + "[" + std::to_string(j) + "]");
    return first;
  }

  Index size() const { return static_cast<Index>(problem_.variable_names.size()); }

  Eigen::VectorXd zeros() const { return Eigen::VectorXd::Zero(size()); }

  void cost(Index var, double c) {
    sized();
    problem_.objective(var) = c;
  }

  void row(Eigen::VectorXd coefficients, Relation rel, double rhs) {
    sized();
    problem_.add_constraint(std::move(coefficients), rel, rhs);
  }

  /// For each measure i: sum_j data(i,j) w_j - own(i) * scale rel 0.
  /// scale < 0 drops the scale term and compares against own(i) instead.
  void envelopment(Index weights, const Eigen::MatrixXd& data, Index scale,
                   const Eigen::VectorXd& own, Relation rel) {
    for (Index i = 0; i < data.rows(); ++i) {
      Eigen::VectorXd a = zeros();
      a.segment(weights, data.cols()) = data.row(i).transpose();
      if (scale >= 0) {
        a(scale) -= own(i);
        row(std::move(a), rel, 0.0);
      } else {
        row(std::move(a), rel, own(i));
      }
    }
  }

  /// For each measure i: sum_j data(i,j) w_j - target_i rel 0.
  void against_targets(Index weights, const Eigen::MatrixXd& data, Index targets, Relation rel) {
    for (Index i = 0; i < data.rows(); ++i) {
      Eigen::VectorXd a = zeros();
      a.segment(weights, data.cols()) = data.row(i).transpose();
      a(targets + i) -= 1.0;
      row(std::move(a), rel, 0.0);
    }
  }

  void convexity(Index weights, Index n) {
    Eigen::VectorXd a = zeros();
    a.segment(weights, n).setOnes();
    row(std::move(a), Relation::equal, 1.0);
  }

  /// |expr . x - value| <= band as two inequalities.
  void band(const Eigen::VectorXd& expr, double value, double band) {
    row(expr, Relation::less_equal, value + band);
    row(expr, Relation::greater_equal, value - band);
  }

  const LpProblemd& problem() {
    sized();
    return problem_;
  }

 private:
  void sized() {
    if (problem_.objective.size() != size()) {
      if (!problem_.constraints.empty()) {
        throw std::logic_error("LpBuilder: variable declared after the first row");
      }
      const Index old = problem_.objective.size();
      problem_.objective.conservativeResize(size());
      problem_.objective.tail(size() - old).setZero();
    }
  }

  LpProblemd problem_;
};

/// Solves and throws SolverError unless the LP reached an optimum.
inline LpSolutiond solve_or_throw(const LpProblemd& problem, const std::string& what) {
  LpSolutiond s = solve_lp(problem);
  if (!s.optimal()) {
    throw SolverError(what + ": LP " + to_string(s.status));
  }
  return s;
}

inline bool any_flagged(const LpSolutiond& s, Eigen::Index first, Eigen::Index count) {
  for (Eigen::Index j = first; j < first + count; ++j) {
    if (s.alternative_optima[static_cast<std::size_t>(j)]) return true;
  }
  return false;
}

}  // namespace mpss::detail
