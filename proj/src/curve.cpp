#include "grasscurve/curve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "grasscurve/errors.hpp"

namespace grasscurve {

namespace {

MultiVec row_as_multivec(const CoeffBlock& block, int row) {
  std::vector<cplx> comps(block.cols());
  for (Eigen::Index i = 0; i < block.cols(); ++i) comps[i] = block(row, i);
  return MultiVec(static_cast<int>(block.cols()), 1, std::move(comps));
}

}  // namespace

Curve::Curve(int n, int d, std::vector<CoeffBlock> blocks)
    : n_(n), d_(d), blocks_(std::move(blocks)) {
  if (n < 1) throw InputError("Curve: n must be positive");
  if (d < 1) throw InputError("Curve: d must be positive");
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (blocks_[i].cols() != n) {
      throw InputError("Curve: coefficient block " + std::to_string(i + 1) + " has " +
                       std::to_string(blocks_[i].cols()) + " columns, expected " +
                       std::to_string(n));
    }
  }
}

Curve Curve::zero(int n, int d, int deg_max) {
  return Curve(n, d, std::vector<CoeffBlock>(deg_max, CoeffBlock::Zero(2, n)));
}

int Curve::poly_degree() const {
  for (int a = deg_max(); a >= 1; --a) {
    if (!blocks_[a - 1].isZero(0.0)) return a;
  }
  return 0;
}

CoeffBlock Curve::block(int alpha) const {
  if (alpha < 1) throw InputError("Curve::block: alpha is 1-based");
  if (alpha > deg_max()) return CoeffBlock::Zero(2, n_);
  return blocks_[alpha - 1];
}

MultiVec Curve::a1(int alpha) const { return row_as_multivec(block(alpha), 0); }
MultiVec Curve::a2(int alpha) const { return row_as_multivec(block(alpha), 1); }

Curve Curve::with_degree(int d) const { return Curve(n_, d, blocks_); }

double Curve::coeff_scale() const {
  double m = 0.0;
  for (const auto& b : blocks_) {
    if (b.size() > 0) m = std::max(m, b.cwiseAbs().maxCoeff());
  }
  return m;
}

CoeffVectors coefficient_vectors(const Curve& c) {
  CoeffVectors out;
  out.n = c.n();
  out.span = std::max(c.d(), c.deg_max());
  const int n = c.n();
  const int D = out.span;

  std::vector<MultiVec> a1;
  std::vector<MultiVec> a2;
  a1.reserve(D);
  a2.reserve(D);
  for (int alpha = 1; alpha <= D; ++alpha) {
    const CoeffBlock b = c.block(alpha);
    Eigen::VectorXcd w(2 * n);
    w.head(n) = b.row(0).transpose();
    w.tail(n) = b.row(1).transpose();
    out.w.push_back(std::move(w));
    a1.push_back(c.a1(alpha));
    a2.push_back(c.a2(alpha));
  }

  out.v.assign(2 * D, MultiVec(n, 2));
  if (n >= 2) {
    for (int alpha = 1; alpha <= D; ++alpha) {
      for (int beta = 1; beta <= D; ++beta) {
        wedge_accumulate(a1[alpha - 1], a2[beta - 1], 1.0, out.v[alpha + beta - 1]);
      }
    }
  }
  return out;
}

GramReport gram_residual(const Curve& c, double tol) {
  const CoeffVectors cv = coefficient_vectors(c);
  const int D = cv.span;
  const int size = 2 * D + 1;

  GramReport rep;
  rep.actual = Eigen::MatrixXcd::Zero(size, size);
  rep.actual(0, 0) = 1.0;
  for (int p = 1; p <= 2 * D; ++p) {
    for (int q = 1; q <= 2 * D; ++q) {
      cplx s = herm_inner(cv.V(p), cv.V(q));
      if (p <= D && q <= D) s += cv.W(q).dot(cv.W(p));  // <W_p, W_q>
      rep.actual(p, q) = s;
    }
  }
  rep.residual = rep.actual;
  for (int p = 0; p < size; ++p) {
    rep.residual(p, p) -= static_cast<double>(binomial(c.d(), p));
  }
  rep.max_abs = rep.residual.cwiseAbs().maxCoeff();
  rep.frobenius = rep.residual.norm();
  rep.is_cc = rep.max_abs <= tol;
  return rep;
}

int fullness_rank(const Curve& c, double tol) {
  const int rows = 2 * c.deg_max();
  if (rows == 0) return 0;
  Eigen::MatrixXcd m(rows, c.n());
  for (int a = 0; a < c.deg_max(); ++a) m.middleRows(2 * a, 2) = c.blocks()[a];
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) > tol * s(0)) ++rank;
  }
  return rank;
}

VerifyReport verify(const Curve& c, double tol, double rank_tol) {
  const GramReport g = gram_residual(c, tol);
  VerifyReport rep;
  rep.max_residual = g.max_abs;
  rep.is_cc = g.is_cc;
  rep.fullness_rank = fullness_rank(c, rank_tol);
  rep.is_full = rep.fullness_rank == c.n();
  rep.degree_ok = c.d() <= binomial(c.n() + 2, 2) - 1;

  // The Gram matrix fixes d' through its (1,1) entry once V_1 = 0: |W_1|^2 = C(d',1).
  const int max_observable = (static_cast<int>(g.actual.rows()) - 1) / 2;
  const double guess = std::round(g.actual(1, 1).real());
  if (guess >= 1.0 && guess <= max_observable) {
    const int dp = static_cast<int>(guess);
    Eigen::MatrixXcd r = g.actual;
    for (Eigen::Index p = 0; p < r.rows(); ++p) r(p, p) -= static_cast<double>(binomial(dp, p));
    if (r.cwiseAbs().maxCoeff() <= tol) rep.implied_degree = dp;
  }
  rep.degree_consistent =
      c.poly_degree() <= c.d() && (!rep.implied_degree || *rep.implied_degree == c.d());
  return rep;
}

CoeffBlock evaluate(const Curve& c, cplx z) {
  CoeffBlock f = CoeffBlock::Zero(2, c.n());
  for (int a = c.deg_max(); a >= 1; --a) f = (f + c.blocks()[a - 1]) * z;
  return f;
}

Eigen::VectorXcd plucker(const Curve& c, cplx z) {
  const int n = c.n();
  const CoeffBlock f = evaluate(c, z);
  Eigen::VectorXcd out(binomial(n + 2, 2));
  out(0) = 1.0;
  out.segment(1, n) = f.row(1).transpose();
  out.segment(1 + n, n) = -f.row(0).transpose();
  if (n >= 2) {
    const MultiVec f12 = wedge(row_as_multivec(f, 0), row_as_multivec(f, 1));
    for (std::size_t i = 0; i < f12.size(); ++i) out(1 + 2 * n + static_cast<Eigen::Index>(i)) = f12[i];
  }
  return out;
}

}  // namespace grasscurve
