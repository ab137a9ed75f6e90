#include <doctest.h>

#include "mpss/report.hpp"
#include "mpss/stats.hpp"

#include <fstream>
#include <random>
#include <sstream>

using namespace mpss;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (const double x : v) out(i++) = x;
  return out;
}

Eigen::VectorXd table_column(const char* file, const std::string& column) {
  std::ifstream in(std::string(MPSS_TEST_DATA) + "/" + file);
  std::stringstream text;
  text << in.rdbuf();
  const ReportTable t = parse_report_csv(text.str());
  const auto at = std::find(t.headers.begin(), t.headers.end(), column);
  REQUIRE(at != t.headers.end());
  const auto j = static_cast<std::size_t>(at - t.headers.begin());
  Eigen::VectorXd out(static_cast<Eigen::Index>(t.rows.size()));
  for (std::size_t i = 0; i < t.rows.size(); ++i) out(static_cast<Eigen::Index>(i)) = t.rows[i][j].value.value();
  return out;
}

// Five groups of twenty with one-decimal values, so ties occur.
ScoreGroups<double> tied_groups() {
  return {vec({2.1, 3.5, 2.8, 3.1, 1.3, 0.3, 1.3, 3.5, 1.1, 1.3, 4.6, 2.6, 2.9, 3.0, 4.6, 6.2, 4.3, 7.4, 4.6, 1.2}),
          vec({0.8, 2.0, 0.5, 2.7, 1.8, 2.0, 1.6, 2.2, 5.1, 5.2, 0.9, 3.1, 2.0, 2.9, 4.9, 5.3, 1.2, 2.8, 4.4, 4.5}),
          vec({5.3, 4.3, 2.4, 2.3, 4.4, 1.6, 6.5, 3.8, 1.7, 5.8, 4.4, 9.4, 2.4, 4.1, 6.5, 5.6, 7.0, 3.5, 1.3, 6.1}),
          vec({2.4, 7.4, 3.1, 1.8, 3.4, 6.1, 9.2, 2.7, 3.9, 2.4, 3.9, 6.4, 6.7, 8.2, 3.6, 6.8, 4.0, 2.2, 3.3, 2.0}),
          vec({8.5, 5.9, 6.0, 8.3, 1.4, 4.2, 3.7, 7.9, 2.1, 7.1, 7.3, 3.9, 3.3, 9.9, 2.5, 2.8, 6.6, 5.7, 6.1, 8.0})};
}

}  // namespace

TEST_CASE("midranks") {
  CHECK(average_ranks(vec({3, 1, 2})).isApprox(vec({3, 1, 2})));
  CHECK(average_ranks(vec({5, 5, 1, 5})).isApprox(vec({3, 3, 1, 3})));
  CHECK(average_ranks(vec({2, 2})).isApprox(vec({1.5, 1.5})));
}

TEST_CASE("chi-square survival function") {
  struct Row {
    double x;
    int df;
    double sf;
  };
  // Reference values from scipy.stats.chi2.sf.
  const Row rows[] = {{0.119, 1, 0.7301216109477959},   {3.841, 1, 0.050013683763956804},
                      {0.557, 1, 0.4554715198597594},   {10, 4, 0.04042768199451279},
                      {0.5, 3, 0.9188914116546758},     {50, 7, 1.4444852779215397e-08},
                      {0.001, 2, 0.9995001249791693},   {200, 1, 2.0884875837625688e-45}};
  for (const Row& r : rows) {
    CAPTURE(r.x);
    CHECK(chi_square_sf(r.x, r.df) == doctest::Approx(r.sf).epsilon(1e-10));
  }
  CHECK(chi_square_sf(0.0, 3) == 1.0);
  CHECK_THROWS_AS(chi_square_sf(1.0, 0), Error);
  CHECK_THROWS_AS(chi_square_sf(-1.0, 1), Error);
}

TEST_CASE("identical groups give H = 0 and p = 1") {
  const auto r = kruskal_wallis<double>({vec({1, 2, 3}), vec({1, 2, 3})});
  CHECK(r.h_statistic == doctest::Approx(0).scale(1));
  CHECK(r.p_value == doctest::Approx(1));
  CHECK(r.degrees_of_freedom == 1);

  const auto flat = kruskal_wallis<double>({vec({4, 4}), vec({4, 4, 4})});
  CHECK(flat.h_statistic == 0);
  CHECK(flat.p_value == 1);
  CHECK(flat.tie_groups == 1);
  CHECK(flat.tied_values == 5);
}

TEST_CASE("tie correction matches scipy.stats.kruskal") {
  const auto corrected = kruskal_wallis(tied_groups());
  CHECK(corrected.h_statistic == doctest::Approx(18.103009965181883).epsilon(1e-12));
  CHECK(corrected.p_value == doctest::Approx(0.0011781821139888122).epsilon(1e-9));
  CHECK(corrected.degrees_of_freedom == 4);
  CHECK(corrected.tie_groups > 0);

  const auto plain = kruskal_wallis(tied_groups(), false);
  CHECK(plain.h_statistic == doctest::Approx(18.09540594059405).epsilon(1e-12));
  CHECK(plain.p_value == doctest::Approx(0.0011822227546001943).epsilon(1e-9));
  CHECK_FALSE(plain.tie_corrected);
}

TEST_CASE("operation scores across two years") {
  const auto r = kruskal_wallis<double>(
      {table_column("table5.csv", "operation_2014"), table_column("table5.csv", "operation_2015")});
  CHECK(std::abs(r.h_statistic - 0.119) <= 0.01);
  CHECK(std::abs(r.p_value - 0.730) <= 0.01);
  CHECK(r.degrees_of_freedom == 1);
}

TEST_CASE("invalid group sets") {
  CHECK_THROWS_AS(kruskal_wallis<double>({vec({1, 2})}), Error);
  CHECK_THROWS_AS(kruskal_wallis<double>({vec({1, 2}), Eigen::VectorXd()}), Error);
}

TEST_CASE("invariances") {
  const auto groups = tied_groups();
  const auto base = kruskal_wallis(groups);

  SUBCASE("strictly increasing transform") {
    ScoreGroups<double> g = groups;
    for (auto& v : g) v = (v.array() * 3.0 + 1.0).exp().matrix();
    const auto r = kruskal_wallis(g);
    CHECK(r.h_statistic == doctest::Approx(base.h_statistic).epsilon(1e-12));
  }
  SUBCASE("permutation within groups") {
    std::mt19937 rng(11);
    ScoreGroups<double> g = groups;
    for (auto& v : g) std::shuffle(v.begin(), v.end(), rng);
    CHECK(kruskal_wallis(g).h_statistic == doctest::Approx(base.h_statistic).epsilon(1e-12));
  }
  SUBCASE("group order") {
    ScoreGroups<double> g = groups;
    std::reverse(g.begin(), g.end());
    CHECK(kruskal_wallis(g).h_statistic == doctest::Approx(base.h_statistic).epsilon(1e-12));
  }
  SUBCASE("range") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> pick(0, 4);
    for (int k = 0; k < 50; ++k) {
      ScoreGroups<double> g(3, Eigen::VectorXd(6));
      for (auto& v : g)
        for (auto& x : v) x = pick(rng);
      const auto r = kruskal_wallis(g);
      CHECK(r.h_statistic >= 0);
      CHECK(r.p_value >= 0);
      CHECK(r.p_value <= 1);
    }
  }
}

TEST_CASE("long double") {
  ScoreGroups<long double> g;
  for (const auto& v : tied_groups()) g.push_back(v.cast<long double>());
  const auto r = kruskal_wallis(g);
  CHECK(static_cast<double>(r.h_statistic) == doctest::Approx(18.103009965181883).epsilon(1e-12));
}
