#include <doctest.h>

#include <random>

#include "grasscurve/curve.hpp"
#include "grasscurve/families.hpp"
#include "grasscurve/invariants.hpp"
#include "test_support.hpp"

using namespace grasscurve;

TEST_SUITE("families") {

TEST_CASE("veronese coefficients") {
  const auto v1 = veronese(1);
  REQUIRE(v1.size() == 2);
  CHECK(v1[0] == 1.0);
  CHECK(v1[1] == 1.0);
  const auto v2 = veronese(2);
  REQUIRE(v2.size() == 3);
  CHECK(v2[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(v2[2] == 1.0);
}

TEST_CASE("veronese binomial identity") {
  std::mt19937_64 rng(1);
  for (int d = 1; d <= 9; ++d) {
    const auto v = veronese(d);
    const cplx z = support::random_point(rng);
    double sum = 0.0;
    for (int k = 0; k <= d; ++k) sum += v[k] * v[k] * std::pow(std::norm(z), k);
    const double want = std::pow(1.0 + std::norm(z), d);
    CHECK(std::abs(sum - want) <= 1e-13 * want);
  }
}

TEST_CASE("degree-n family coefficients for n = 2") {
  const Curve c = family_dn(2);
  CHECK(c.n() == 2);
  CHECK(c.d() == 2);
  CHECK(std::abs(c.block(1)(0, 0) - std::sqrt(2.0)) < 1e-15);
  CHECK(c.block(2)(0, 1) == cplx(1.0));
  CHECK(c.block(1).row(1).norm() == 0.0);
  CHECK(c.block(2).row(1).norm() == 0.0);
  for (const auto& v : coefficient_vectors(c).v) CHECK(v.is_zero());
}

TEST_CASE("degree-2n family coefficients for n = 2") {
  const Curve c = family_d2n(2);
  const double r3 = std::sqrt(3.0);
  CHECK(c.d() == 4);
  CHECK(std::abs(c.block(2)(0, 0) - r3) < 1e-15);
  CHECK(std::abs(c.block(3)(0, 1) - 2.0) < 1e-15);
  CHECK(std::abs(c.block(1)(1, 0) - 2.0) < 1e-15);
  CHECK(std::abs(c.block(2)(1, 1) - r3) < 1e-15);
}

TEST_CASE("first column of F2 in the degree-2n family is sqrt(2n) z") {
  for (int n = 2; n <= 5; ++n) {
    const Curve c = family_d2n(n);
    CHECK(std::abs(c.block(1)(1, 0) - std::sqrt(2.0 * n)) < 1e-14);
    CHECK(verify(c, 1e-12).is_cc);
  }
}

TEST_CASE("degree-n family is constantly curved, full and degenerate") {
  for (int n = 2; n <= 6; ++n) {
    const Curve c = family_dn(n);
    const auto r = verify(c, 1e-12);
    CHECK(r.passed());
    CHECK(r.max_residual <= 1e-12);
    CHECK(r.fullness_rank == n);
    CHECK(c.d() == n);
    CHECK(r.degree_consistent);
    CHECK(ramification(c).degenerate);
  }
}

TEST_CASE("degree-2n family is constantly curved, full and degenerate") {
  for (int n = 2; n <= 5; ++n) {
    const Curve c = family_d2n(n);
    const auto r = verify(c, 1e-12);
    CHECK(r.passed());
    CHECK(r.max_residual <= 1e-12);
    CHECK(r.fullness_rank == n);
    CHECK(c.d() == 2 * n);
    CHECK(r.degree_consistent);
    const double s = c.coeff_scale();
    CHECK(g_vector(c).max_abs() <= 1e-12 * s * s * s * s);
    CHECK(ramification(c).degenerate);
  }
}

}  // TEST_SUITE
