#pragma once

// Independent formulations of the MPSS / efficiency models for the vertex
// oracle. Written directly from the model statements, with the free
// intermediate targets projected out (supply >= target >= usage becomes
// supply >= usage), so the oracle works in a smaller space than the
// production builders.

#include "vertex_oracle.hpp"
#include "synthetic.hpp"

namespace oracle {

namespace detail {

// Layout helper: a block of scalar variables followed by weight vectors.
struct Layout {
  Eigen::Index scalars;
  Eigen::Index n;
  Eigen::Index blocks;
  Eigen::Index size() const { return scalars + n * blocks; }
  Eigen::Index weight(Eigen::Index block, Eigen::Index j) const { return scalars + block * n + j; }
};

// sum_j w_block,j * data(i, j)  [+ coef * var]  rel 0
inline void add_rows(Lp& lp, const Layout& L, Eigen::Index block, const Eigen::MatrixXd& data,
                     Eigen::Index scale_var, const Eigen::VectorXd& own, Rel rel) {
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(L.size());
    for (Eigen::Index j = 0; j < L.n; ++j) a(L.weight(block, j)) = data(i, j);
    if (scale_var >= 0) a(scale_var) = -own(i);
    lp.rows.push_back({a, rel, 0.0});
  }
}

// sum_j w_supply,j data(i,j) - sum_j w_use,j data(i,j) >= 0
inline void add_coupling(Lp& lp, const Layout& L, Eigen::Index supply, Eigen::Index use,
                         const Eigen::MatrixXd& data) {
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    Eigen::VectorXd a = Eigen::VectorXd::Zero(L.size());
    for (Eigen::Index j = 0; j < L.n; ++j) {
      a(L.weight(supply, j)) += data(i, j);
      a(L.weight(use, j)) -= data(i, j);
    }
    lp.rows.push_back({a, Rel::ge, 0.0});
  }
}

inline void add_convexity(Lp& lp, const Layout& L, Eigen::Index block) {
  Eigen::VectorXd a = Eigen::VectorXd::Zero(L.size());
  for (Eigen::Index j = 0; j < L.n; ++j) a(L.weight(block, j)) = 1.0;
  lp.rows.push_back({a, Rel::eq, 1.0});
}

inline void add_band(Lp& lp, const Eigen::VectorXd& expr, double value, double band) {
  lp.rows.push_back({expr, Rel::le, value + band});
  lp.rows.push_back({expr, Rel::ge, value - band});
}

}  // namespace detail

// Variables: [in1, out1, in2, out2, lambda1(n), lambda2(n)]
namespace two_stage {
constexpr Eigen::Index in1 = 0, out1 = 1, in2 = 2, out2 = 3;
}

inline Lp blackbox(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& outputs, Eigen::Index o) {
  const detail::Layout L{2, inputs.cols(), 1};
  Lp lp;
  lp.maximize = true;
  lp.c = Eigen::VectorXd::Zero(L.size());
  lp.c(1) = 1.0;
  lp.c(0) = -1.0;
  detail::add_rows(lp, L, 0, inputs, 0, inputs.col(o), Rel::le);
  detail::add_rows(lp, L, 0, outputs, 1, outputs.col(o), Rel::ge);
  detail::add_convexity(lp, L, 0);
  return lp;
}

inline Lp network_variable(const TwoStageData& d, Eigen::Index o) {
  using namespace two_stage;
  const detail::Layout L{4, d.dmus(), 2};
  Lp lp;
  lp.c = Eigen::VectorXd::Zero(L.size());
  lp.c(out2) = 1.0;
  lp.c(in1) = -1.0;
  detail::add_rows(lp, L, 0, d.x1, in1, d.x1.col(o), Rel::le);
  detail::add_rows(lp, L, 0, d.y1, out1, d.y1.col(o), Rel::ge);
  detail::add_coupling(lp, L, 0, 1, d.z);
  detail::add_rows(lp, L, 1, d.x2, in2, d.x2.col(o), Rel::le);
  detail::add_rows(lp, L, 1, d.y2, out2, d.y2.col(o), Rel::ge);
  detail::add_convexity(lp, L, 0);
  detail::add_convexity(lp, L, 1);
  return lp;
}

inline Lp network_radial(const TwoStageData& d, Eigen::Index o) {
  using namespace two_stage;
  const detail::Layout L{4, d.dmus(), 2};
  Lp lp;
  lp.c = Eigen::VectorXd::Zero(L.size());
  lp.c(out2) = 1.0;
  lp.c(in1) = -1.0;
  detail::add_rows(lp, L, 0, d.x1, in1, d.x1.col(o), Rel::le);
  detail::add_rows(lp, L, 0, d.z, out1, d.z.col(o), Rel::ge);
  detail::add_rows(lp, L, 0, d.y1, out1, d.y1.col(o), Rel::ge);
  detail::add_rows(lp, L, 1, d.z, in2, d.z.col(o), Rel::le);
  detail::add_rows(lp, L, 1, d.x2, in2, d.x2.col(o), Rel::le);
  detail::add_rows(lp, L, 1, d.y2, out2, d.y2.col(o), Rel::ge);
  detail::add_convexity(lp, L, 0);
  detail::add_convexity(lp, L, 1);
  return lp;
}

/// Stage-1 lexicographic model: radial constraints, system value held in a band.
inline Lp stage_one(const TwoStageData& d, Eigen::Index o, double system, double band) {
  using namespace two_stage;
  Lp lp = network_radial(d, o);
  Eigen::VectorXd expr = Eigen::VectorXd::Zero(lp.c.size());
  expr(out2) = 1.0;
  expr(in1) = -1.0;
  detail::add_band(lp, expr, system, band);
  lp.c.setZero();
  lp.c(out1) = 1.0;
  lp.c(in1) = -1.0;
  return lp;
}

inline Lp stage_two(const TwoStageData& d, Eigen::Index o, double system, double stage1,
                    double band) {
  using namespace two_stage;
  Lp lp = stage_one(d, o, system, band);
  Eigen::VectorXd expr = Eigen::VectorXd::Zero(lp.c.size());
  expr(out1) = 1.0;
  expr(in1) = -1.0;
  detail::add_band(lp, expr, stage1, band);
  lp.c.setZero();
  lp.c(out2) = 1.0;
  lp.c(in2) = -1.0;
  return lp;
}

// Chain variables: [operation, rd, market, lambda(n), mu(n), phi(n)]
namespace chain {
constexpr Eigen::Index operation = 0, rd = 1, market = 2;
}

inline Lp chain_mpss(const ChainData& d, Eigen::Index o, double w1, double w2, double w3) {
  using namespace chain;
  const detail::Layout L{3, d.dmus(), 3};
  Lp lp;
  lp.c = Eigen::VectorXd::Zero(L.size());
  lp.c(market) = w1;
  lp.c(operation) = -w2;
  lp.c(rd) = -w3;
  detail::add_rows(lp, L, 0, d.xo, operation, d.xo.col(o), Rel::le);
  detail::add_rows(lp, L, 1, d.xr, rd, d.xr.col(o), Rel::le);
  detail::add_coupling(lp, L, 0, 2, d.zo);
  detail::add_coupling(lp, L, 1, 2, d.zr);
  detail::add_rows(lp, L, 2, d.y, market, d.y.col(o), Rel::ge);
  for (Eigen::Index b = 0; b < 3; ++b) detail::add_convexity(lp, L, b);
  return lp;
}

inline Lp chain_efficiency(const ChainData& d, Eigen::Index o, double w1, double w2, double w3) {
  using namespace chain;
  Lp lp = chain_mpss(d, o, 1, 1, 1);
  lp.maximize = false;
  lp.c.setZero();
  lp.c(operation) = w1;
  lp.c(rd) = w2;
  lp.c(market) = -w3;
  for (auto [var, rel, bound] : {std::tuple{operation, Rel::le, 1.0}, std::tuple{rd, Rel::le, 1.0},
                                 std::tuple{market, Rel::ge, 1.0}}) {
    lp.rows.push_back({Eigen::VectorXd::Unit(lp.c.size(), var), rel, bound});
  }
  return lp;
}

// Profitability variables: [op_in, op_out, rd_in, rd_out, market, lambda, mu, phi]
inline Lp profitability(const ChainData& d, Eigen::Index o, double chain_score, double w1,
                        double w2, double w3, double band) {
  constexpr Eigen::Index op_in = 0, op_out = 1, rd_in = 2, rd_out = 3, market = 4;
  const detail::Layout L{5, d.dmus(), 3};
  Lp lp;
  lp.c = Eigen::VectorXd::Zero(L.size());
  lp.c(op_out) = 1.0;
  lp.c(op_in) = -1.0;
  lp.c(rd_out) = 1.0;
  lp.c(rd_in) = -1.0;
  detail::add_rows(lp, L, 0, d.xo, op_in, d.xo.col(o), Rel::le);
  detail::add_rows(lp, L, 0, d.zo, op_out, d.zo.col(o), Rel::ge);
  detail::add_rows(lp, L, 1, d.xr, rd_in, d.xr.col(o), Rel::le);
  detail::add_rows(lp, L, 1, d.zr, rd_out, d.zr.col(o), Rel::ge);
  detail::add_rows(lp, L, 2, d.zo, op_out, d.zo.col(o), Rel::le);
  detail::add_rows(lp, L, 2, d.zr, rd_out, d.zr.col(o), Rel::le);
  detail::add_rows(lp, L, 2, d.y, market, d.y.col(o), Rel::ge);
  for (Eigen::Index b = 0; b < 3; ++b) detail::add_convexity(lp, L, b);
  Eigen::VectorXd expr = Eigen::VectorXd::Zero(L.size());
  expr(market) = w1;
  expr(op_in) = -w2;
  expr(rd_in) = -w3;
  detail::add_band(lp, expr, chain_score, band);
  return lp;
}

}  // namespace oracle
