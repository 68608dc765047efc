#pragma once

// Congruence moves on curves: the left GL(2) frame change, right unitary
// action on C^n, Moebius reparametrization, and the SVD normal form of A_1.

#include <Eigen/Dense>
#include <vector>

#include "grasscurve/curve.hpp"

namespace grasscurve {

/// z -> (a z + b) / (c z + d).
struct Mobius {
  cplx a{1.0, 0.0};
  cplx b{};
  cplx c{};
  cplx d{1.0, 0.0};

  static Mobius identity() { return {}; }
  /// (alpha z + beta) / (-conj(beta) z + conj(alpha)) with |alpha|^2 + |beta|^2 = 1 after scaling.
  static Mobius su2(cplx alpha, cplx beta);

  cplx det() const { return a * d - b * c; }
  cplx operator()(cplx z) const { return (a * z + b) / (c * z + d); }
  Mobius inverse() const { return {d, -b, -c, a}; }
  /// True when some scalar multiple lies in SU(2), i.e. the map is a rotation
  /// of the round sphere. Only these preserve the constant-curvature normalization.
  bool is_isometry(double tol = 1e-10) const;
};

using Matrix2c = Eigen::Matrix2cd;

/// Every A_alpha -> M A_alpha. Throws InputError when M is singular.
Curve apply_gl2(const Curve& c, const Matrix2c& M);

/// Every A_alpha -> A_alpha U. Throws InputError unless U^* U = I within 1e-10.
Curve apply_unitary(const Curve& c, const Eigen::MatrixXcd& U);

/// Pulls the curve back along m and returns it to chart form [I_2, F'] with
/// F'(0) = 0, using a constant left 2x2 factor and a constant unitary on
/// C^{n+2}. Throws InputError for a singular m and DomainError when the
/// result is not a polynomial of degree <= d in the new chart.
Curve apply_mobius(const Curve& c, const Mobius& m);

/// A 2 x (n+2) frame polynomial Psi(z) = sum_k frame[k] z^k spanning a curve.
/// Brings it to chart form [I_2, F] with F(0) = 0 (same reduction as
/// apply_mobius). Throws DomainError if F is not polynomial of degree <= d.
Curve normalize_frame(const std::vector<Eigen::MatrixXcd>& frame, int n, int d);

/// Chart form of F(z) = A_0 + sum_{alpha>=1} A_alpha z^alpha, moving the
/// point z = 0 to the chart origin. Returns the input unchanged when A_0 = 0.
Curve recenter(int n, int d, const CoeffBlock& a0, const std::vector<CoeffBlock>& blocks);

/// Congruent curve with a1^(1) = (s1, 0, ...), a2^(1) = (0, s2, 0, ...),
/// s1 >= s2 >= 0, and remaining phase freedoms fixed: for columns beyond
/// rank(A_1) the first nonzero entry (by alpha, then row) is made real
/// positive; if s2 = 0 the second row's phase is fixed the same way using
/// column 0. Idempotent. Throws DomainError when A_1 = 0.
Curve canonicalize_a1(const Curve& c);

}  // namespace grasscurve
