#include <doctest.h>

#include <random>

#include "grasscurve/families.hpp"
#include "grasscurve/invariants.hpp"
#include "grasscurve/solver.hpp"
#include "test_support.hpp"

using namespace grasscurve;

namespace {

WVectors random_w(int n, int d, std::mt19937_64& rng) {
  WVectors w(d, Eigen::VectorXcd(2 * n));
  for (auto& v : w) {
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = support::gauss(rng);
  }
  return w;
}

// Residual vector rebuilt from the Gram matrix of the curve module.
Eigen::VectorXd residuals_from_gram(const WVectors& w) {
  const int d = static_cast<int>(w.size());
  const int n = static_cast<int>(w[0].size()) / 2;
  const Curve c = curve_from_w(n, d, w);
  const auto g = gram_residual(c);
  const auto cv = coefficient_vectors(c);
  std::vector<double> out;
  std::vector<int> betas{1};
  for (int b = d + 1; b <= 2 * d; ++b) betas.push_back(b);
  for (int b : betas) {
    for (const cplx x : cv.V(b).coeffs()) {
      out.push_back(x.real());
      out.push_back(x.imag());
    }
  }
  for (int a = 1; a <= d; ++a) out.push_back(g.residual(a, a).real());
  for (int a = 1; a <= d; ++a) {
    for (int b = a + 1; b <= d; ++b) {
      const cplx x = g.residual(a, b);
      out.push_back(x.real());
      out.push_back(x.imag());
    }
  }
  return Eigen::Map<Eigen::VectorXd>(out.data(), static_cast<Eigen::Index>(out.size()));
}

Eigen::MatrixXd fd_jacobian(const WVectors& w, double h) {
  const Eigen::VectorXd r0 = residuals(w);
  const int n2 = static_cast<int>(w[0].size());
  Eigen::MatrixXd J(r0.size(), 2 * n2 * static_cast<int>(w.size()));
  for (std::size_t a = 0; a < w.size(); ++a) {
    for (int i = 0; i < n2; ++i) {
      for (int part = 0; part < 2; ++part) {
        const cplx step = part == 0 ? cplx(h, 0.0) : cplx(0.0, h);
        WVectors plus = w, minus = w;
        plus[a](i) += step;
        minus[a](i) -= step;
        J.col(2 * (static_cast<int>(a) * n2 + i) + part) = (residuals(plus) - residuals(minus)) / (2.0 * h);
      }
    }
  }
  return J;
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("w vectors round trip through curves") {
  const Curve c = family_d2n(2);
  const WVectors w = w_vectors(c);
  REQUIRE(w.size() == 4);
  const Curve back = curve_from_w(2, 4, w);
  for (int alpha = 1; alpha <= 4; ++alpha) CHECK(back.block(alpha) == c.block(alpha));
}

TEST_CASE("residual examples") {
  CHECK(residuals(w_vectors(family_d2n(2))).cwiseAbs().maxCoeff() <= 1e-14);
  const WVectors zero(1, Eigen::VectorXcd::Zero(4));
  const Eigen::VectorXd r = residuals(zero);
  CHECK(r.cwiseAbs().maxCoeff() == 1.0);
  int nonzero = 0;
  for (Eigen::Index i = 0; i < r.size(); ++i) {
    if (r(i) != 0.0) {
      ++nonzero;
      CHECK(r(i) == -1.0);
    }
  }
  CHECK(nonzero == 1);
}

TEST_CASE("residuals agree with the gram residual") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 100; ++t) {
    const int n = 2 + t % 4;
    const int d = 1 + t % 5;
    const WVectors w = random_w(n, d, rng);
    const Eigen::VectorXd a = residuals(w);
    const Eigen::VectorXd b = residuals_from_gram(w);
    REQUIRE(a.size() == b.size());
    CHECK((a - b).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, b.cwiseAbs().maxCoeff()));
    CHECK(a.norm() > 0.0);
  }
}

TEST_CASE("jacobian matches central differences") {
  std::mt19937_64 rng(std::random_device{}());
  for (const auto& [n, d] : {std::pair{2, 3}, {3, 4}, {4, 3}}) {
    const WVectors w = random_w(n, d, rng);
    const Eigen::MatrixXd J = jacobian(w);
    const Eigen::MatrixXd F = fd_jacobian(w, 1e-6);
    REQUIRE(J.rows() == F.rows());
    REQUIRE(J.cols() == F.cols());
    CHECK((J - F).cwiseAbs().maxCoeff() <= 1e-6 * std::max(1.0, J.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("jacobian vanishes at the origin") {
  for (const auto& [n, d] : {std::pair{2, 1}, {2, 3}, {3, 4}}) {
    const WVectors w(d, Eigen::VectorXcd::Zero(2 * n));
    CHECK(jacobian(w).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("jacobian rows of quadratic residuals scale linearly") {
  std::mt19937_64 rng(3);
  const WVectors w = random_w(3, 3, rng);
  WVectors w2 = w;
  const double t = 2.5;
  for (auto& v : w2) v *= t;
  const Eigen::MatrixXd J = jacobian(w);
  const Eigen::MatrixXd J2 = jacobian(w2);
  // V rows: Re/Im over C(3,2) entries for beta in {1, 4, 5, 6}.
  const Eigen::Index v_rows = 2 * 3 * 4;
  REQUIRE(v_rows <= residuals(w).size());
  CHECK((J2.topRows(v_rows) - t * J.topRows(v_rows)).cwiseAbs().maxCoeff() <=
        1e-12 * std::max(1.0, J2.topRows(v_rows).cwiseAbs().maxCoeff()));
}

TEST_CASE("search finds the degree-3 curve in G(2,4)") {
  SearchProblem p;
  p.n = 2;
  p.d = 3;
  p.restarts = 50;
  const auto rep = search(p);
  REQUIRE(rep.feasible);
  CHECK(rep.best_residual <= p.tol_feasible);
  CHECK(rep.full);
  CHECK(rep.fullness_rank == 2);
  REQUIRE(rep.best_curve.has_value());
  CHECK(verify(*rep.best_curve, p.tol_feasible).passed());
  CHECK(tail_probe(*rep.best_curve).dim_bound_ok);
  CHECK(rep.label.find("solution found") != std::string::npos);
}

TEST_CASE("search reports no degree-5 curve in G(2,4)") {
  SearchProblem p;
  p.n = 2;
  p.d = 5;
  p.restarts = 200;
  const auto rep = search(p);
  CHECK_FALSE(rep.feasible);
  CHECK(rep.best_residual > 1e-4);
  CHECK(rep.restarts_run == 200);
  CHECK_FALSE(rep.restarts_to_hit.has_value());
  CHECK(rep.label.find("search evidence, not proof") != std::string::npos);
  int total = 0;
  for (const auto& [bin, count] : rep.histogram) total += count;
  CHECK(total == 200);
}

TEST_CASE("search finds the degree-6 curve in G(2,5)") {
  SearchProblem p;
  p.n = 3;
  p.d = 6;
  p.restarts = 200;
  const auto rep = search(p);
  REQUIRE(rep.feasible);
  CHECK(rep.fullness_rank == 3);
  CHECK(verify(*rep.best_curve, p.tol_feasible).passed());
  const auto probe = tail_probe(*rep.best_curve);
  CHECK(probe.dim_bound_ok);
  CHECK(probe.residual <= 1e-8);
}

TEST_CASE("search is deterministic across thread counts") {
  SearchProblem p;
  p.n = 3;
  p.d = 4;
  p.restarts = 20;
  p.threads = 1;
  const auto a = search(p);
  p.threads = 2;
  const auto b = search(p);
  const auto c = search(p);
  CHECK(a.feasible == b.feasible);
  CHECK(a.restarts_to_hit == b.restarts_to_hit);
  CHECK(std::abs(a.best_residual - b.best_residual) <= 1e-12);
  CHECK(b.restarts_to_hit == c.restarts_to_hit);
  CHECK(b.best_residual == c.best_residual);
  p.rng_seed = 7;
  const auto other = search(p);
  CHECK(other.seed == 7);
}

TEST_CASE("fullness is a filter, not a residual") {
  SearchProblem p;
  p.n = 3;
  p.d = 2;
  p.restarts = 30;
  const auto rep = search(p);
  CHECK_FALSE(rep.feasible);
  CHECK(rep.best_residual_any <= rep.best_residual);
}

TEST_CASE("feasibility scan covers the range") {
  SearchProblem p;
  p.restarts = 30;
  const auto rows = feasibility_scan(2, 2, 3, p);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].d == 2);
  CHECK(rows[1].d == 3);
  CHECK(rows[0].feasible);
  CHECK(rows[1].feasible);
}

}  // TEST_SUITE
