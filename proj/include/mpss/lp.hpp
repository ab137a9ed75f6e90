#pragma once

// Dense linear programs and a two-phase primal simplex solver.
//
// Problems are stated in their natural form (maximize or minimize, mixed
// relations, per-variable lower bounds) and converted internally to
// equality standard form. Every model in this library is small, so the
// solver works on a dense Eigen tableau.

#include <Eigen/Dense>

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace mpss {

enum class Sense { minimize, maximize };

enum class Relation { less_equal, equal, greater_equal };

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

const char* to_string(LpStatus status) noexcept;
const char* to_string(Relation relation) noexcept;

/// Raised for structurally malformed problems (dimension mismatches, NaNs).
class LpFormatError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
struct LpConstraint {
  VectorX<Scalar> coefficients;
  Relation relation = Relation::less_equal;
  Scalar rhs = Scalar(0);
};

template <typename Scalar>
struct LpProblem {
  Sense sense = Sense::minimize;
  VectorX<Scalar> objective;
  std::vector<LpConstraint<Scalar>> constraints;
  /// Empty means every variable is bounded below by zero. An entry of
  /// -infinity makes that variable free.
  VectorX<Scalar> lower_bounds;
  std::vector<std::string> variable_names;

  Eigen::Index num_variables() const noexcept { return objective.size(); }

  Scalar lower_bound(Eigen::Index j) const {
    return lower_bounds.size() == 0 ? Scalar(0) : lower_bounds(j);
  }

  void add_constraint(VectorX<Scalar> coefficients, Relation relation, Scalar rhs) {
    constraints.push_back({std::move(coefficients), relation, rhs});
  }

  /// Throws LpFormatError when the problem is not well formed.
  void validate() const;
};

template <typename Scalar>
struct LpTolerances {
  Scalar feasibility = Scalar(1e-7);
  Scalar pivot = Scalar(1e-9);
  Scalar optimality = Scalar(1e-9);
  Scalar objective = Scalar(1e-6);
  /// Zero selects a limit proportional to the tableau size.
  long max_iterations = 0;
};

template <typename Scalar>
struct LpSolution {
  LpStatus status = LpStatus::infeasible;
  Scalar objective_value = std::numeric_limits<Scalar>::quiet_NaN();
  VectorX<Scalar> variable_values;
  /// Constraint multipliers in the problem's own sense: at an optimum,
  /// objective - A^T duals equals reduced_costs.
  VectorX<Scalar> duals;
  VectorX<Scalar> reduced_costs;
  /// True for variables that change along some zero-reduced-cost pivot
  /// direction of the final tableau, i.e. the reported value is one of
  /// several optimal values.
  std::vector<bool> alternative_optima;
  long iterations = 0;
  bool used_bland = false;

  bool optimal() const noexcept { return status == LpStatus::optimal; }
};

template <typename Scalar>
LpSolution<Scalar> solve_lp(const LpProblem<Scalar>& problem,
                            const LpTolerances<Scalar>& tolerances = {});

using LpProblemd = LpProblem<double>;
using LpSolutiond = LpSolution<double>;

}  // namespace mpss

#include "mpss/detail/simplex.hpp"
