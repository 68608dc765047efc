#include "grasscurve/gauge.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

#include "grasscurve/errors.hpp"

namespace grasscurve {

namespace {

using Poly = std::vector<cplx>;

Poly poly_mul(const Poly& p, const Poly& q) {
  Poly out(p.size() + q.size() - 1, cplx{});
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = 0; j < q.size(); ++j) out[i + j] += p[i] * q[j];
  }
  return out;
}

std::vector<Poly> powers_of(const Poly& base, int count) {
  std::vector<Poly> out{Poly{cplx{1.0, 0.0}}};
  for (int k = 1; k <= count; ++k) out.push_back(poly_mul(out.back(), base));
  return out;
}

bool real_positive(cplx x) { return x.imag() == 0.0 && x.real() > 0.0; }

}  // namespace

Mobius Mobius::su2(cplx alpha, cplx beta) {
  const double norm = std::sqrt(std::norm(alpha) + std::norm(beta));
  if (!(norm > 0.0)) throw InputError("Mobius::su2: alpha and beta both zero");
  alpha /= norm;
  beta /= norm;
  return {alpha, beta, -std::conj(beta), std::conj(alpha)};
}

bool Mobius::is_isometry(double tol) const {
  const cplx det = a * d - b * c;
  if (std::abs(det) == 0.0) return false;
  const cplx s = std::sqrt(det);
  const cplx A = a / s, B = b / s, C = c / s, D = d / s;
  return std::abs(C + std::conj(B)) <= tol && std::abs(D - std::conj(A)) <= tol;
}

Curve apply_gl2(const Curve& c, const Matrix2c& M) {
  const double scale = M.cwiseAbs().maxCoeff();
  if (!(std::abs(M.determinant()) > 1e-12 * scale * scale)) {
    throw InputError("apply_gl2: M is singular");
  }
  std::vector<CoeffBlock> blocks;
  blocks.reserve(c.blocks().size());
  for (const auto& b : c.blocks()) blocks.emplace_back(M * b);
  return Curve(c.n(), c.d(), std::move(blocks));
}

Curve apply_unitary(const Curve& c, const Eigen::MatrixXcd& U) {
  if (U.rows() != c.n() || U.cols() != c.n()) {
    throw InputError("apply_unitary: U must be " + std::to_string(c.n()) + "x" + std::to_string(c.n()));
  }
  const Eigen::MatrixXcd defect = U.adjoint() * U - Eigen::MatrixXcd::Identity(c.n(), c.n());
  if (defect.cwiseAbs().maxCoeff() > 1e-10) throw InputError("apply_unitary: U is not unitary");
  std::vector<CoeffBlock> blocks;
  blocks.reserve(c.blocks().size());
  for (const auto& b : c.blocks()) blocks.emplace_back(b * U);
  return Curve(c.n(), c.d(), std::move(blocks));
}

namespace {

using PluckerPoly = std::vector<Eigen::VectorXcd>;

// Lexicographic 2x2 minors of sum_k frame[k] z^k, by power of z.
PluckerPoly frame_minors(const std::vector<Eigen::MatrixXcd>& frame) {
  const int m = static_cast<int>(frame.front().cols());
  const auto tuples = all_tuples(m, 2);
  const auto len = static_cast<Eigen::Index>(tuples.size());
  PluckerPoly out(2 * frame.size() - 1, Eigen::VectorXcd::Zero(len));
  for (std::size_t i = 0; i < frame.size(); ++i) {
    for (std::size_t j = 0; j < frame.size(); ++j) {
      const auto& x = frame[i];
      const auto& y = frame[j];
      for (Eigen::Index r = 0; r < len; ++r) {
        const int a = tuples[r][0] - 1, b = tuples[r][1] - 1;
        out[i + j](r) += x(0, a) * y(1, b) - x(0, b) * y(1, a);
      }
    }
  }
  return out;
}

// Chart form [I_2, F] of the plane curve with Pluecker coordinates p(z).
Curve chart_from_plucker(PluckerPoly p, int n, int d) {
  const int m = n + 2;
  double scale = 0.0;
  for (const auto& v : p) scale = std::max(scale, v.cwiseAbs().maxCoeff());
  if (!(scale > 0.0)) throw DomainError("normalize_frame: frame has rank below 2 everywhere");
  const double tol = 1e-10 * scale;
  while (!p.empty() && p.front().cwiseAbs().maxCoeff() <= tol) p.erase(p.begin());
  while (!p.empty() && p.back().cwiseAbs().maxCoeff() <= tol) p.pop_back();
  if (p.empty()) throw DomainError("normalize_frame: frame degenerates at the origin");

  const auto tuples = all_tuples(m, 2);
  const auto len = static_cast<Eigen::Index>(tuples.size());
  const Eigen::VectorXcd& p0 = p.front();
  if (p0.tail(len - 1).cwiseAbs().maxCoeff() > tol) {
    // Rotate C^{n+2} so the plane at the origin becomes span(e_1, e_2).
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(m, m);
    for (Eigen::Index r = 0; r < len; ++r) {
      const int i = tuples[r][0] - 1, j = tuples[r][1] - 1;
      A(i, j) = p0(r);
      A(j, i) = -p0(r);
    }
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeFullU);
    const Eigen::MatrixXcd V = svd.matrixU().conjugate();
    Eigen::MatrixXcd L2(len, len);
    for (Eigen::Index out = 0; out < len; ++out) {
      const int i = tuples[out][0] - 1, j = tuples[out][1] - 1;
      for (Eigen::Index in = 0; in < len; ++in) {
        const int k = tuples[in][0] - 1, l = tuples[in][1] - 1;
        L2(out, in) = V(k, i) * V(l, j) - V(k, j) * V(l, i);
      }
    }
    for (auto& v : p) v = L2 * v;
  }

  // F2_k = p_{1,k+3} / p_{12}, F1_k = -p_{2,k+3} / p_{12}, as power series.
  const int order = std::max(2 * d + 1, static_cast<int>(p.size()));
  auto coeff = [&](int k, Eigen::Index r) { return k < static_cast<int>(p.size()) ? p[k](r) : cplx{}; };
  const cplx den0 = coeff(0, 0);
  if (!(std::abs(den0) > tol)) throw DomainError("normalize_frame: frame degenerates at the origin");
  std::vector<CoeffBlock> x(order + 1, CoeffBlock::Zero(2, n));
  for (int k = 0; k <= order; ++k) {
    for (int col = 0; col < n; ++col) {
      const std::vector<int> t1{1, col + 3}, t2{2, col + 3};
      cplx f1 = -coeff(k, static_cast<Eigen::Index>(tuple_rank(t2, m)));
      cplx f2 = coeff(k, static_cast<Eigen::Index>(tuple_rank(t1, m)));
      for (int j = 1; j <= k; ++j) {
        const cplx dj = coeff(j, 0);
        if (dj == cplx{}) continue;
        f1 -= dj * x[k - j](0, col);
        f2 -= dj * x[k - j](1, col);
      }
      x[k](0, col) = f1 / den0;
      x[k](1, col) = f2 / den0;
    }
  }

  double body = 1.0, tail = 0.0;
  for (int k = 1; k <= order; ++k) {
    const double mag = x[k].cwiseAbs().maxCoeff();
    if (k <= d) {
      body = std::max(body, mag);
    } else {
      tail = std::max(tail, mag);
    }
  }
  if (tail > 1e-6 * body) {
    char rel[32];
    std::snprintf(rel, sizeof rel, "%.3g", tail / body);
    throw DomainError(std::string("the reparametrized curve leaves the polynomial chart (relative coefficient ") +
                      rel + " beyond degree " + std::to_string(d) +
                      "); only rotations of the sphere preserve the normalization");
  }
  int top = 0;
  for (int k = 1; k <= d; ++k) {
    if (x[k].cwiseAbs().maxCoeff() > 0.0) top = k;
  }
  return Curve(n, d, std::vector<CoeffBlock>(x.begin() + 1, x.begin() + 1 + top));
}

}  // namespace

Curve normalize_frame(const std::vector<Eigen::MatrixXcd>& frame, int n, int d) {
  if (frame.empty()) throw InputError("normalize_frame: empty frame");
  for (const auto& m : frame) {
    if (m.rows() != 2 || m.cols() != n + 2) throw InputError("normalize_frame: frame blocks must be 2 x (n+2)");
  }
  return chart_from_plucker(frame_minors(frame), n, d);
}

Curve apply_mobius(const Curve& c, const Mobius& m) {
  const double scale = std::max({std::abs(m.a), std::abs(m.b), std::abs(m.c), std::abs(m.d)});
  if (!(std::abs(m.det()) > 1e-12 * scale * scale)) throw InputError("apply_mobius: ad - bc = 0");
  const int n = c.n();
  const int D = c.deg_max();

  std::vector<Eigen::MatrixXcd> frame(D + 1, Eigen::MatrixXcd::Zero(2, n + 2));
  frame[0].leftCols(2).setIdentity();
  for (int alpha = 1; alpha <= D; ++alpha) frame[alpha].rightCols(n) = c.block(alpha);
  const PluckerPoly q = frame_minors(frame);
  double q_scale = 0.0;
  for (const auto& v : q) q_scale = std::max(q_scale, v.cwiseAbs().maxCoeff());
  int e = 0;
  for (int k = 0; k < static_cast<int>(q.size()); ++k) {
    if (q[k].cwiseAbs().maxCoeff() > 1e-9 * q_scale) e = k;
  }

  // Homogenize the Pluecker curve by its degree, then w = (a z + b) / (c z + d).
  const auto num = powers_of({m.b, m.a}, e);
  const auto den = powers_of({m.d, m.c}, e);
  PluckerPoly p(e + 1, Eigen::VectorXcd::Zero(q.front().size()));
  for (int k = 0; k <= e; ++k) {
    const Poly term = poly_mul(num[k], den[e - k]);
    for (std::size_t j = 0; j < term.size(); ++j) {
      if (term[j] != cplx{}) p[j] += term[j] * q[k];
    }
  }
  Curve out = chart_from_plucker(std::move(p), n, c.d());
  if (out.deg_max() < D) {
    std::vector<CoeffBlock> blocks = out.blocks();
    blocks.resize(D, CoeffBlock::Zero(2, n));
    out = Curve(n, c.d(), std::move(blocks));
  }
  return out;
}

Curve recenter(int n, int d, const CoeffBlock& a0, const std::vector<CoeffBlock>& blocks) {
  if (a0.rows() != 2 || a0.cols() != n) throw InputError("recenter: a0 must be 2 x n");
  if (a0.cwiseAbs().maxCoeff() == 0.0) return Curve(n, d, blocks);
  std::vector<Eigen::MatrixXcd> frame(blocks.size() + 1, Eigen::MatrixXcd::Zero(2, n + 2));
  frame[0].leftCols(2).setIdentity();
  frame[0].rightCols(n) = a0;
  for (std::size_t k = 0; k < blocks.size(); ++k) frame[k + 1].rightCols(n) = blocks[k];
  return normalize_frame(frame, n, d);
}

Curve canonicalize_a1(const Curve& c) {
  const int n = c.n();
  const CoeffBlock a1 = c.block(1);
  const double a1_max = a1.size() > 0 ? a1.cwiseAbs().maxCoeff() : 0.0;
  if (!(a1_max > 0.0)) throw DomainError("canonicalize_a1: A_1 = 0, the curve is not immersive at 0");

  bool canonical = real_positive(a1(0, 0));
  if (n >= 2) {
    canonical = canonical && a1(1, 1).imag() == 0.0 && a1(1, 1).real() >= 0.0 &&
                a1(1, 1).real() <= a1(0, 0).real();
  }
  for (int j = 0; j < n && canonical; ++j) {
    if (j != 0 && a1(0, j) != cplx{}) canonical = false;
    if (j != 1 && a1(1, j) != cplx{}) canonical = false;
  }

  std::vector<CoeffBlock> blocks = c.blocks();
  if (!canonical) {
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a1, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Curve moved = apply_unitary(apply_gl2(c, svd.matrixU().adjoint()), svd.matrixV());
    blocks = moved.blocks();
    const auto& s = svd.singularValues();
    blocks[0].setZero();
    blocks[0](0, 0) = s(0);
    if (n >= 2 && s(1) > 1e-12 * s(0)) blocks[0](1, 1) = s(1);
  }

  const int rank = (n >= 2 && blocks[0](1, 1) != cplx{}) ? 2 : 1;
  double scale = 0.0;
  for (const auto& b : blocks) scale = std::max(scale, b.cwiseAbs().maxCoeff());
  const double eps = 1e-12 * scale;

  if (rank == 1) {
    for (auto& b : blocks) {
      const cplx x = b(1, 0);
      if (std::abs(x) <= eps) continue;
      if (!real_positive(x)) {
        const cplx ph = std::conj(x) / std::abs(x);
        for (auto& bb : blocks) bb.row(1) *= ph;
        b(1, 0) = std::abs(x);
      }
      break;
    }
  }
  for (int j = rank; j < n; ++j) {
    bool done = false;
    for (auto& b : blocks) {
      for (int row = 0; row < 2 && !done; ++row) {
        const cplx x = b(row, j);
        if (std::abs(x) <= eps) continue;
        if (!real_positive(x)) {
          const cplx ph = std::conj(x) / std::abs(x);
          for (auto& bb : blocks) bb.col(j) *= ph;
          b(row, j) = std::abs(x);
        }
        done = true;
      }
      if (done) break;
    }
  }
  return Curve(n, c.d(), std::move(blocks));
}

}  // namespace grasscurve
