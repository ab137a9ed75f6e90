#include <doctest.h>

#include "mpss/lp.hpp"
#include "oracle/random_lp.hpp"

#include <random>

using namespace mpss;

namespace {

LpProblemd box_problem() {
  LpProblemd p;
  p.sense = Sense::maximize;
  p.objective = Eigen::Vector2d(1, 1);
  p.add_constraint(Eigen::Vector2d(1, 0), Relation::less_equal, 2);
  p.add_constraint(Eigen::Vector2d(0, 1), Relation::less_equal, 3);
  return p;
}

void check_optimality_certificate(const LpProblemd& p, const LpSolutiond& s) {
  const double sign = p.sense == Sense::maximize ? 1.0 : -1.0;
  double dual_objective = 0;
  for (std::size_t i = 0; i < p.constraints.size(); ++i) {
    const auto& c = p.constraints[i];
    const double y = s.duals(static_cast<Eigen::Index>(i));
    const double slack = c.coefficients.dot(s.variable_values) - c.rhs;
    CHECK(std::abs(y * slack) <= 1e-6);
    if (c.relation == Relation::less_equal) CHECK(sign * y >= -1e-7);
    if (c.relation == Relation::greater_equal) CHECK(sign * y <= 1e-7);
    dual_objective += y * c.rhs;
  }
  for (Eigen::Index j = 0; j < p.num_variables(); ++j) {
    CHECK(std::abs(s.variable_values(j) * s.reduced_costs(j)) <= 1e-6);
    CHECK(sign * s.reduced_costs(j) <= 1e-7);
  }
  CHECK(dual_objective == doctest::Approx(s.objective_value).epsilon(1e-9).scale(1.0));
}

}  // namespace

TEST_CASE("box constraints") {
  const LpSolutiond s = solve_lp(box_problem());
  REQUIRE(s.status == LpStatus::optimal);
  CHECK(s.objective_value == doctest::Approx(5));
  CHECK(s.variable_values(0) == doctest::Approx(2));
  CHECK(s.variable_values(1) == doctest::Approx(3));
}

TEST_CASE("empty feasible set") {
  LpProblemd p;
  p.sense = Sense::maximize;
  p.objective = Eigen::VectorXd::Ones(1);
  p.add_constraint(Eigen::VectorXd::Ones(1), Relation::less_equal, -1);
  CHECK(solve_lp(p).status == LpStatus::infeasible);
}

TEST_CASE("unbounded ray") {
  LpProblemd p;
  p.sense = Sense::maximize;
  p.objective = Eigen::Vector2d(1, 0);
  p.add_constraint(Eigen::Vector2d(1, -1), Relation::less_equal, 1);
  CHECK(solve_lp(p).status == LpStatus::unbounded);
}

TEST_CASE("equalities, free variables and shifted bounds") {
  LpProblemd p;
  p.sense = Sense::minimize;
  p.objective = Eigen::Vector3d(1, 1, 0);
  p.add_constraint(Eigen::Vector3d(1, -1, 0), Relation::equal, -3);
  p.add_constraint(Eigen::Vector3d(0, 1, 1), Relation::greater_equal, 4);
  p.lower_bounds = Eigen::Vector3d(-std::numeric_limits<double>::infinity(), 2, 1);
  const LpSolutiond s = solve_lp(p);
  REQUIRE(s.optimal());
  // x1 = x2 - 3, so the objective is 2 x2 - 3 with x2 >= 2.
  CHECK(s.objective_value == doctest::Approx(1));
  CHECK(s.variable_values(0) == doctest::Approx(-1));
  CHECK(s.variable_values(1) == doctest::Approx(2));
}

TEST_CASE("redundant equality rows") {
  LpProblemd p;
  p.sense = Sense::maximize;
  p.objective = Eigen::Vector2d(1, 2);
  p.add_constraint(Eigen::Vector2d(1, 1), Relation::equal, 1);
  p.add_constraint(Eigen::Vector2d(2, 2), Relation::equal, 2);
  const LpSolutiond s = solve_lp(p);
  REQUIRE(s.optimal());
  CHECK(s.objective_value == doctest::Approx(2));
}

TEST_CASE("degenerate cycling example terminates") {
  // Beale's example cycles under the textbook largest-coefficient rule.
  LpProblemd p;
  p.sense = Sense::minimize;
  p.objective.resize(4);
  p.objective << -0.75, 150, -0.02, 6;
  Eigen::VectorXd a(4);
  a << 0.25, -60, -0.04, 9;
  p.add_constraint(a, Relation::less_equal, 0);
  a << 0.5, -90, -0.02, 3;
  p.add_constraint(a, Relation::less_equal, 0);
  a << 0, 0, 1, 0;
  p.add_constraint(a, Relation::less_equal, 1);
  const LpSolutiond s = solve_lp(p);
  REQUIRE(s.optimal());
  CHECK(s.objective_value == doctest::Approx(-0.05));
}

TEST_CASE("malformed problems are rejected") {
  LpProblemd p = box_problem();
  p.constraints[0].coefficients = Eigen::Vector3d(1, 0, 0);
  CHECK_THROWS_AS(solve_lp(p), LpFormatError);
  p = box_problem();
  p.objective(0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(solve_lp(p), LpFormatError);
  p = box_problem();
  p.lower_bounds = Eigen::VectorXd::Zero(3);
  CHECK_THROWS_AS(solve_lp(p), LpFormatError);
}

TEST_CASE("alternative optima are flagged") {
  LpProblemd p;
  p.sense = Sense::maximize;
  p.objective = Eigen::Vector2d(1, 1);
  p.add_constraint(Eigen::Vector2d(1, 1), Relation::less_equal, 4);
  const LpSolutiond s = solve_lp(p);
  REQUIRE(s.optimal());
  CHECK(s.objective_value == doctest::Approx(4));
  CHECK((s.alternative_optima[0] || s.alternative_optima[1]));
  CHECK_FALSE(solve_lp(box_problem()).alternative_optima[0]);
}

TEST_CASE("other scalar types") {
  LpProblem<long double> p;
  p.sense = Sense::maximize;
  p.objective = VectorX<long double>::Ones(2);
  p.add_constraint(VectorX<long double>::Ones(2), Relation::less_equal, 3.0L);
  const auto s = solve_lp(p);
  REQUIRE(s.optimal());
  CHECK(static_cast<double>(s.objective_value) == doctest::Approx(3));
}

TEST_CASE("random suite against vertex enumeration") {
  std::mt19937 rng(7);
  int optimal = 0, infeasible = 0, unbounded = 0;
  for (int k = 0; k < 200; ++k) {
    CAPTURE(k);
    const oracle::RandomLp c = oracle::random_lp(rng);
    const LpSolutiond s = solve_lp(c.problem);
    const oracle::Answer a = oracle::solve(c.reference);
    REQUIRE(s.status == oracle::expected_status(a.outcome));
    if (a.outcome == oracle::Outcome::optimal) {
      ++optimal;
      CHECK(std::abs(s.objective_value - a.value) <= 1e-6);
      for (const auto& row : c.problem.constraints) {
        const double lhs = row.coefficients.dot(s.variable_values);
        if (row.relation != Relation::greater_equal) CHECK(lhs <= row.rhs + 1e-7);
        if (row.relation != Relation::less_equal) CHECK(lhs >= row.rhs - 1e-7);
      }
      CHECK(s.variable_values.minCoeff() >= -1e-7);
      check_optimality_certificate(c.problem, s);

      for (const double scale : {0.5, 2.0, 10.0}) {
        LpProblemd rhs_scaled = c.problem;
        for (auto& row : rhs_scaled.constraints) row.rhs *= scale;
        const LpSolutiond t = solve_lp(rhs_scaled);
        REQUIRE(t.optimal());
        CHECK(t.objective_value == doctest::Approx(scale * s.objective_value).epsilon(1e-9).scale(1.0));
        LpProblemd cost_scaled = c.problem;
        cost_scaled.objective *= scale;
        const LpSolutiond u = solve_lp(cost_scaled);
        REQUIRE(u.optimal());
        CHECK(u.objective_value == doctest::Approx(scale * s.objective_value).epsilon(1e-9).scale(1.0));
      }
    } else if (a.outcome == oracle::Outcome::infeasible) {
      ++infeasible;
    } else {
      ++unbounded;
    }
    const LpSolutiond again = solve_lp(c.problem);
    CHECK(again.status == s.status);
    if (s.optimal()) CHECK((again.variable_values.array() == s.variable_values.array()).all());
  }
  // The generator exercises all three outcomes.
  CHECK(optimal > 20);
  CHECK(infeasible > 20);
  CHECK(unbounded > 5);
}
