#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>

namespace mpss {

inline const char* to_string(LpStatus status) noexcept {
  switch (status) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

inline const char* to_string(Relation relation) noexcept {
  switch (relation) {
    case Relation::less_equal: return "<=";
    case Relation::equal: return "=";
    case Relation::greater_equal: return ">=";
  }
  return "?";
}

template <typename Scalar>
void LpProblem<Scalar>::validate() const {
  const Eigen::Index n = num_variables();
  auto fail = [](const std::string& what) { throw LpFormatError(what); };
  if (!objective.allFinite()) fail("objective contains a non-finite coefficient");
  if (lower_bounds.size() != 0 && lower_bounds.size() != n) {
    std::ostringstream os;
    os << "lower_bounds has length " << lower_bounds.size() << ", expected " << n;
    fail(os.str());
  }
  for (Eigen::Index j = 0; j < lower_bounds.size(); ++j) {
    const Scalar lb = lower_bounds(j);
    if (std::isnan(lb) || lb == std::numeric_limits<Scalar>::infinity()) {
      fail("lower bound of variable " + std::to_string(j) + " must be finite or -inf");
    }
  }
  if (!variable_names.empty() && static_cast<Eigen::Index>(variable_names.size()) != n) {
    fail("variable_names has " + std::to_string(variable_names.size()) +
         " entries, expected " + std::to_string(n));
  }
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    const auto& row = constraints[i];
    if (row.coefficients.size() != n) {
      std::ostringstream os;
      os << "constraint " << i << " has " << row.coefficients.size()
         << " coefficients, expected " << n;
      fail(os.str());
    }
    if (!row.coefficients.allFinite() || !std::isfinite(row.rhs)) {
      fail("constraint " + std::to_string(i) + " contains a non-finite value");
    }
    switch (row.relation) {
      case Relation::less_equal:
      case Relation::equal:
      case Relation::greater_equal:
        break;
      default:
        fail("constraint " + std::to_string(i) + " has an invalid relation");
    }
  }
}

namespace detail {

enum class ColumnKind { structural, slack, artificial };

// Dense tableau simplex over the standard form  min c^T x, A x = b, x >= 0, b >= 0.
// Rows 0..m-1 hold [A | b]; row m holds reduced costs and -objective.
template <typename Scalar>
class DenseSimplex {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = VectorX<Scalar>;
  using Index = Eigen::Index;

  DenseSimplex(const LpProblem<Scalar>& problem, const LpTolerances<Scalar>& tol)
      : problem_(problem), tol_(tol) {
    build();
  }

  LpSolution<Scalar> solve() {
    LpSolution<Scalar> out;
    const Index n = problem_.num_variables();
    out.variable_values = Vector::Zero(n);
    out.duals = Vector::Zero(static_cast<Index>(problem_.constraints.size()));
    out.reduced_costs = Vector::Zero(n);
    out.alternative_optima.assign(static_cast<std::size_t>(n), false);

    const LpStatus phase_one = run_phase_one();
    out.iterations = iterations_;
    out.used_bland = used_bland_;
    if (phase_one != LpStatus::optimal) {
      out.status = phase_one;
      return out;
    }
    load_phase_two_costs();
    const LpStatus phase_two = iterate();
    out.iterations = iterations_;
    out.used_bland = used_bland_;
    out.status = phase_two;
    if (phase_two != LpStatus::optimal) return out;

    extract(out);
    return out;
  }

 private:
  struct ColumnInfo {
    ColumnKind kind;
    Index variable;  // original variable for structural columns
    Scalar sign;     // +1, or -1 for the negative half of a free variable
  };

  void build() {
    const Index n = problem_.num_variables();
    const Index m = static_cast<Index>(problem_.constraints.size());

    shift_ = Vector::Zero(n);
    for (Index j = 0; j < n; ++j) {
      const Scalar lb = problem_.lower_bound(j);
      if (std::isinf(lb)) {
        columns_.push_back({ColumnKind::structural, j, Scalar(1)});
        columns_.push_back({ColumnKind::structural, j, Scalar(-1)});
      } else {
        shift_(j) = lb;
        columns_.push_back({ColumnKind::structural, j, Scalar(1)});
      }
    }
    const Index structural = static_cast<Index>(columns_.size());

    // Per-row normalisation: scale to unit max coefficient, flip to b >= 0.
    std::vector<Relation> relation(static_cast<std::size_t>(m));
    Matrix rows = Matrix::Zero(m, structural);
    Vector rhs(m);
    row_factor_ = Vector::Ones(m);
    for (Index i = 0; i < m; ++i) {
      const auto& c = problem_.constraints[static_cast<std::size_t>(i)];
      for (Index k = 0; k < structural; ++k) {
        const auto& col = columns_[static_cast<std::size_t>(k)];
        rows(i, k) = col.sign * c.coefficients(col.variable);
      }
      rhs(i) = c.rhs - c.coefficients.dot(shift_);
      const Scalar largest = structural > 0 ? rows.row(i).cwiseAbs().maxCoeff() : Scalar(0);
      Scalar factor = largest > Scalar(0) ? Scalar(1) / largest : Scalar(1);
      Relation rel = c.relation;
      if (rhs(i) * factor < Scalar(0)) {
        factor = -factor;
        if (rel == Relation::less_equal) {
          rel = Relation::greater_equal;
        } else if (rel == Relation::greater_equal) {
          rel = Relation::less_equal;
        }
      }
      rows.row(i) *= factor;
      rhs(i) *= factor;
      row_factor_(i) = factor;
      relation[static_cast<std::size_t>(i)] = rel;
    }

    // Append slack, surplus and artificial columns.
    Index extra = 0;
    for (Index i = 0; i < m; ++i) {
      const Relation rel = relation[static_cast<std::size_t>(i)];
      extra += (rel == Relation::greater_equal) ? 2 : 1;
    }
    const Index total = structural + extra;
    tableau_ = Matrix::Zero(m + 1, total + 1);
    tableau_.topLeftCorner(m, structural) = rows;
    tableau_.block(0, total, m, 1) = rhs;
    basis_.assign(static_cast<std::size_t>(m), 0);
    Index next = structural;
    for (Index i = 0; i < m; ++i) {
      const Relation rel = relation[static_cast<std::size_t>(i)];
      if (rel == Relation::less_equal) {
        tableau_(i, next) = Scalar(1);
        columns_.push_back({ColumnKind::slack, -1, Scalar(1)});
        basis_[static_cast<std::size_t>(i)] = next++;
      } else {
        if (rel == Relation::greater_equal) {
          tableau_(i, next) = Scalar(-1);
          columns_.push_back({ColumnKind::slack, -1, Scalar(-1)});
          ++next;
        }
        tableau_(i, next) = Scalar(1);
        columns_.push_back({ColumnKind::artificial, -1, Scalar(1)});
        basis_[static_cast<std::size_t>(i)] = next++;
      }
    }
    original_ = tableau_.topLeftCorner(m, total);
    scaled_rhs_norm_ = m > 0 ? rhs.cwiseAbs().maxCoeff() : Scalar(0);
    row_of_constraint_.resize(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) row_of_constraint_[static_cast<std::size_t>(i)] = i;

    cost_ = Vector::Zero(total);
    const Scalar direction = problem_.sense == Sense::maximize ? Scalar(-1) : Scalar(1);
    for (Index k = 0; k < structural; ++k) {
      const auto& col = columns_[static_cast<std::size_t>(k)];
      cost_(k) = direction * col.sign * problem_.objective(col.variable);
    }

    max_iterations_ = tol_.max_iterations > 0
                          ? tol_.max_iterations
                          : 200 * static_cast<long>(m + total) + 1000;
  }

  Index rows() const { return tableau_.rows() - 1; }
  Index cols() const { return tableau_.cols() - 1; }
  Scalar& rhs(Index i) { return tableau_(i, cols()); }
  Scalar current_value() const { return -tableau_(rows(), tableau_.cols() - 1); }

  void pivot(Index r, Index c) {
    const Scalar p = tableau_(r, c);
    tableau_.row(r) /= p;
    Vector column = tableau_.col(c);
    column(r) = Scalar(0);
    const Eigen::Matrix<Scalar, 1, Eigen::Dynamic> pivot_row = tableau_.row(r);
    tableau_.noalias() -= column * pivot_row;
    tableau_.col(c).setZero();
    tableau_(r, c) = Scalar(1);
    basis_[static_cast<std::size_t>(r)] = c;
  }

  bool is_basic(Index c) const {
    return std::find(basis_.begin(), basis_.end(), c) != basis_.end();
  }

  LpStatus iterate() {
    const Index m = rows();
    const Index total = cols();
    const long stall_limit = 3 * static_cast<long>(m + total);
    long stalled = 0;
    bool bland = false;
    Scalar best = current_value();

    for (;;) {
      if (iterations_ >= max_iterations_) return LpStatus::iteration_limit;

      Index entering = -1;
      Scalar most_negative = -tol_.optimality;
      for (Index j = 0; j < total; ++j) {
        if (columns_[static_cast<std::size_t>(j)].kind == ColumnKind::artificial && phase_two_) {
          continue;
        }
        const Scalar d = tableau_(m, j);
        if (d < most_negative) {
          entering = j;
          if (bland) break;
          most_negative = d;
        }
      }
      if (entering < 0) return LpStatus::optimal;

      Index leaving = -1;
      Scalar best_ratio = std::numeric_limits<Scalar>::infinity();
      for (Index i = 0; i < m; ++i) {
        const Scalar a = tableau_(i, entering);
        if (a <= tol_.pivot) continue;
        const Scalar ratio = std::max(rhs(i), Scalar(0)) / a;
        if (leaving < 0 || ratio < best_ratio - ratio_tie(best_ratio)) {
          leaving = i;
          best_ratio = ratio;
        } else if (ratio <= best_ratio + ratio_tie(best_ratio)) {
          const bool prefer = bland ? basis_[static_cast<std::size_t>(i)] <
                                          basis_[static_cast<std::size_t>(leaving)]
                                    : a > tableau_(leaving, entering);
          if (prefer) {
            leaving = i;
            best_ratio = std::min(best_ratio, ratio);
          }
        }
      }
      if (leaving < 0) return LpStatus::unbounded;

      pivot(leaving, entering);
      ++iterations_;

      const Scalar value = current_value();
      if (value < best - Scalar(1e-12) * (Scalar(1) + std::abs(best))) {
        best = value;
        stalled = 0;
      } else if (!bland && ++stalled > stall_limit) {
        bland = true;
        used_bland_ = true;
      }
    }
  }

  static Scalar ratio_tie(Scalar ratio) {
    return Scalar(1e-12) * (Scalar(1) + std::abs(ratio));
  }

  LpStatus run_phase_one() {
    const Index m = rows();
    const Index total = cols();
    bool any_artificial = false;
    tableau_.row(m).setZero();
    for (Index i = 0; i < m; ++i) {
      const Index b = basis_[static_cast<std::size_t>(i)];
      if (columns_[static_cast<std::size_t>(b)].kind == ColumnKind::artificial) {
        tableau_.row(m) -= tableau_.row(i);
        any_artificial = true;
      }
    }
    for (Index j = 0; j < total; ++j) {
      if (columns_[static_cast<std::size_t>(j)].kind == ColumnKind::artificial && is_basic(j)) {
        tableau_(m, j) = Scalar(0);
      }
    }
    if (any_artificial) {
      const LpStatus status = iterate();
      if (status == LpStatus::iteration_limit) return status;
      const Scalar scale = std::max<Scalar>(Scalar(1), scaled_rhs_norm_);
      if (current_value() > tol_.feasibility * scale) return LpStatus::infeasible;
    }
    drop_artificials();
    phase_two_ = true;
    return LpStatus::optimal;
  }

  // Pivot remaining zero-level artificials out of the basis; rows where that
  // is impossible are linearly dependent and are removed.
  void drop_artificials() {
    std::vector<Index> keep_rows;
    for (Index i = 0; i < rows(); ++i) {
      const Index b = basis_[static_cast<std::size_t>(i)];
      if (columns_[static_cast<std::size_t>(b)].kind != ColumnKind::artificial) {
        keep_rows.push_back(i);
        continue;
      }
      Index best = -1;
      Scalar largest = tol_.pivot;
      for (Index j = 0; j < cols(); ++j) {
        if (columns_[static_cast<std::size_t>(j)].kind == ColumnKind::artificial) continue;
        const Scalar a = std::abs(tableau_(i, j));
        if (a > largest) {
          largest = a;
          best = j;
        }
      }
      if (best >= 0) {
        pivot(i, best);
        keep_rows.push_back(i);
      }
    }

    std::vector<Index> keep_cols;
    for (Index j = 0; j < cols(); ++j) {
      if (columns_[static_cast<std::size_t>(j)].kind != ColumnKind::artificial) {
        keep_cols.push_back(j);
      }
    }
    const Index m = static_cast<Index>(keep_rows.size());
    const Index total = static_cast<Index>(keep_cols.size());
    Matrix reduced = Matrix::Zero(m + 1, total + 1);
    Matrix original = Matrix::Zero(m, total);
    std::vector<Index> new_basis(static_cast<std::size_t>(m));
    std::vector<Index> new_row_of_constraint(row_of_constraint_.size(), -1);
    std::vector<Index> remap(static_cast<std::size_t>(cols()), -1);
    for (Index k = 0; k < total; ++k) remap[static_cast<std::size_t>(keep_cols[static_cast<std::size_t>(k)])] = k;
    for (Index r = 0; r < m; ++r) {
      const Index src = keep_rows[static_cast<std::size_t>(r)];
      for (Index k = 0; k < total; ++k) {
        reduced(r, k) = tableau_(src, keep_cols[static_cast<std::size_t>(k)]);
        original(r, k) = original_(src, keep_cols[static_cast<std::size_t>(k)]);
      }
      reduced(r, total) = tableau_(src, cols());
      new_basis[static_cast<std::size_t>(r)] = remap[static_cast<std::size_t>(basis_[static_cast<std::size_t>(src)])];
    }
    for (std::size_t c = 0; c < row_of_constraint_.size(); ++c) {
      const Index src = row_of_constraint_[c];
      const auto it = std::find(keep_rows.begin(), keep_rows.end(), src);
      if (it != keep_rows.end()) new_row_of_constraint[c] = static_cast<Index>(it - keep_rows.begin());
    }
    std::vector<ColumnInfo> new_columns;
    Vector new_cost(total);
    for (Index k = 0; k < total; ++k) {
      new_columns.push_back(columns_[static_cast<std::size_t>(keep_cols[static_cast<std::size_t>(k)])]);
      new_cost(k) = cost_(keep_cols[static_cast<std::size_t>(k)]);
    }
    tableau_ = std::move(reduced);
    original_ = std::move(original);
    basis_ = std::move(new_basis);
    row_of_constraint_ = std::move(new_row_of_constraint);
    columns_ = std::move(new_columns);
    cost_ = std::move(new_cost);
  }

  void load_phase_two_costs() {
    const Index m = rows();
    tableau_.row(m).setZero();
    tableau_.row(m).head(cols()) = cost_.transpose();
    for (Index i = 0; i < m; ++i) {
      const Scalar cb = cost_(basis_[static_cast<std::size_t>(i)]);
      if (cb != Scalar(0)) tableau_.row(m) -= cb * tableau_.row(i);
    }
  }

  void extract(LpSolution<Scalar>& out) {
    const Index m = rows();
    const Index total = cols();

    Vector standard = Vector::Zero(total);
    for (Index i = 0; i < m; ++i) standard(basis_[static_cast<std::size_t>(i)]) = tableau_(i, total);

    out.variable_values = shift_;
    for (Index k = 0; k < total; ++k) {
      const auto& col = columns_[static_cast<std::size_t>(k)];
      if (col.kind == ColumnKind::structural) {
        out.variable_values(col.variable) += col.sign * standard(k);
      }
    }
    out.objective_value = problem_.objective.dot(out.variable_values);

    // Duals from the optimal basis: B^T y = c_B on the scaled standard rows.
    if (m > 0) {
      Matrix basis_matrix(m, m);
      Vector basis_cost(m);
      for (Index i = 0; i < m; ++i) {
        basis_matrix.col(i) = original_.col(basis_[static_cast<std::size_t>(i)]);
        basis_cost(i) = cost_(basis_[static_cast<std::size_t>(i)]);
      }
      const Vector y = basis_matrix.transpose().fullPivLu().solve(basis_cost);
      const Scalar direction = problem_.sense == Sense::maximize ? Scalar(-1) : Scalar(1);
      for (std::size_t c = 0; c < row_of_constraint_.size(); ++c) {
        const Index r = row_of_constraint_[c];
        if (r < 0) continue;
        out.duals(static_cast<Index>(c)) = direction * y(r) * row_factor_(static_cast<Index>(c));
      }
    }
    out.reduced_costs = problem_.objective;
    for (std::size_t c = 0; c < problem_.constraints.size(); ++c) {
      out.reduced_costs -= out.duals(static_cast<Index>(c)) * problem_.constraints[c].coefficients;
    }

    // Alternative optima: nonbasic columns with zero reduced cost that admit
    // a strictly positive step move every variable touched by their column.
    for (Index j = 0; j < total; ++j) {
      if (is_basic(j) || std::abs(tableau_(m, j)) > tol_.optimality) continue;
      Scalar step = std::numeric_limits<Scalar>::infinity();
      for (Index i = 0; i < m; ++i) {
        const Scalar a = tableau_(i, j);
        if (a > tol_.pivot) step = std::min(step, std::max(tableau_(i, total), Scalar(0)) / a);
      }
      if (!(step > tol_.feasibility)) continue;
      auto mark = [&](Index column) {
        const auto& col = columns_[static_cast<std::size_t>(column)];
        if (col.kind == ColumnKind::structural) {
          out.alternative_optima[static_cast<std::size_t>(col.variable)] = true;
        }
      };
      mark(j);
      for (Index i = 0; i < m; ++i) {
        if (std::abs(tableau_(i, j)) > tol_.pivot) mark(basis_[static_cast<std::size_t>(i)]);
      }
    }
  }

  const LpProblem<Scalar>& problem_;
  LpTolerances<Scalar> tol_;
  Matrix tableau_;
  Matrix original_;
  Vector cost_;
  Vector shift_;
  Vector row_factor_;
  Scalar scaled_rhs_norm_ = 0;
  std::vector<ColumnInfo> columns_;
  std::vector<Index> basis_;
  std::vector<Index> row_of_constraint_;
  long iterations_ = 0;
  long max_iterations_ = 0;
  bool used_bland_ = false;
  bool phase_two_ = false;
};

}  // namespace detail

template <typename Scalar>
LpSolution<Scalar> solve_lp(const LpProblem<Scalar>& problem,
                            const LpTolerances<Scalar>& tolerances) {
  problem.validate();
  detail::DenseSimplex<Scalar> simplex(problem, tolerances);
  return simplex.solve();
}

}  // namespace mpss
