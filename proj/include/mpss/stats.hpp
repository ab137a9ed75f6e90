#pragma once

// Rank statistics: midranks, the Kruskal-Wallis H test and the chi-square
// upper tail it is referred to.

#include "mpss/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace mpss {

/// Midranks (1-based); tied values share the mean of their positions.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> average_ranks(
    const Eigen::MatrixBase<Derived>& values) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = values.size();
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> v = values.reshaped();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return v(a) < v(b); });

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> ranks(n);
  for (Eigen::Index i = 0; i < n;) {
    Eigen::Index j = i;
    while (j + 1 < n && v(order[static_cast<std::size_t>(j + 1)]) == v(order[static_cast<std::size_t>(i)])) ++j;
    const Scalar mid = Scalar(i + j + 2) / Scalar(2);
    for (Eigen::Index k = i; k <= j; ++k) ranks(order[static_cast<std::size_t>(k)]) = mid;
    i = j + 1;
  }
  return ranks;
}

/// Regularized upper incomplete gamma Q(a, x).
template <typename Scalar>
Scalar gamma_q(Scalar a, Scalar x) {
  using std::abs;
  using std::exp;
  using std::log;
  if (!(a > 0) || !(x >= 0)) throw Error("gamma_q: need a > 0 and x >= 0");
  if (x == 0) return Scalar(1);
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();
  const Scalar log_prefix = a * log(x) - x - std::lgamma(a);
  constexpr int max_iter = 10000;
  if (x < a + 1) {
    // Series for P(a, x).
    Scalar term = Scalar(1) / a, sum = term;
    for (int n = 1; n < max_iter; ++n) {
      term *= x / (a + Scalar(n));
      sum += term;
      if (abs(term) < abs(sum) * eps) break;
    }
    return std::clamp(Scalar(1) - sum * exp(log_prefix), Scalar(0), Scalar(1));
  }
  // Continued fraction for Q(a, x), modified Lentz.
  const Scalar tiny = std::numeric_limits<Scalar>::min() / eps;
  Scalar b = x + Scalar(1) - a;
  Scalar c = Scalar(1) / tiny;
  Scalar d = Scalar(1) / b;
  Scalar h = d;
  for (int i = 1; i < max_iter; ++i) {
    const Scalar an = -Scalar(i) * (Scalar(i) - a);
    b += Scalar(2);
    d = an * d + b;
    if (abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (abs(c) < tiny) c = tiny;
    d = Scalar(1) / d;
    const Scalar delta = d * c;
    h *= delta;
    if (abs(delta - Scalar(1)) < eps) break;
  }
  return std::clamp(exp(log_prefix) * h, Scalar(0), Scalar(1));
}

/// Upper-tail probability of a chi-square variable with df degrees of freedom.
template <typename Scalar>
Scalar chi_square_sf(Scalar x, int df) {
  if (df <= 0) throw Error("chi_square_sf: degrees of freedom must be positive");
  if (!(x >= 0)) throw Error("chi_square_sf: x must be nonnegative");
  return gamma_q(Scalar(df) / Scalar(2), x / Scalar(2));
}

template <typename Scalar>
struct KwResult {
  Scalar h_statistic = 0;
  int degrees_of_freedom = 0;
  Scalar p_value = 1;
  bool tie_corrected = true;
  /// Number of distinct values shared by more than one observation, and
  /// the number of observations involved.
  long tie_groups = 0;
  long tied_values = 0;
};

template <typename Scalar>
using ScoreGroups = std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>;

/// Kruskal-Wallis H on pooled midranks. With tie_correction, H is divided
/// by 1 - sum(t^3 - t) / (N^3 - N); if every value is tied, H = 0, p = 1.
template <typename Scalar>
KwResult<Scalar> kruskal_wallis(const ScoreGroups<Scalar>& groups, bool tie_correction = true) {
  if (groups.size() < 2) throw Error("kruskal_wallis: need at least two groups");
  Eigen::Index total = 0;
  for (const auto& g : groups) {
    if (g.size() == 0) throw Error("kruskal_wallis: empty group");
    total += g.size();
  }
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> pooled(total);
  Eigen::Index at = 0;
  for (const auto& g : groups) {
    pooled.segment(at, g.size()) = g;
    at += g.size();
  }
  const auto ranks = average_ranks(pooled);

  KwResult<Scalar> r;
  r.degrees_of_freedom = static_cast<int>(groups.size()) - 1;
  r.tie_corrected = tie_correction;

  const Scalar n = Scalar(total);
  Scalar sum = 0;
  at = 0;
  for (const auto& g : groups) {
    const Scalar rank_sum = ranks.segment(at, g.size()).sum();
    sum += rank_sum * rank_sum / Scalar(g.size());
    at += g.size();
  }
  Scalar h = Scalar(12) / (n * (n + 1)) * sum - Scalar(3) * (n + 1);

  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> sorted = pooled;
  std::sort(sorted.begin(), sorted.end());
  Scalar tie_sum = 0;
  for (Eigen::Index i = 0; i < total;) {
    Eigen::Index j = i;
    while (j + 1 < total && sorted(j + 1) == sorted(i)) ++j;
    const Scalar t = Scalar(j - i + 1);
    if (j > i) {
      ++r.tie_groups;
      r.tied_values += static_cast<long>(j - i + 1);
      tie_sum += t * t * t - t;
    }
    i = j + 1;
  }
  if (tie_correction) {
    const Scalar correction = Scalar(1) - tie_sum / (n * n * n - n);
    if (correction <= 0) {
      r.h_statistic = 0;
      r.p_value = 1;
      return r;
    }
    h /= correction;
  }
  r.h_statistic = std::max(h, Scalar(0));
  r.p_value = chi_square_sf(r.h_statistic, r.degrees_of_freedom);
  return r;
}

}  // namespace mpss
