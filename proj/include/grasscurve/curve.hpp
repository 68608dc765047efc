#pragma once

// Polynomial holomorphic curves f(z) = [I_2, F(z)] into G(2, n+2; C).
//
// F(z) = sum_{alpha>=1} A_alpha z^alpha with each A_alpha a 2 x n complex
// matrix; row 0 is a_1^(alpha) (the F_1 coefficients), row 1 is a_2^(alpha).
// There is no alpha = 0 block, so F(0) = 0 holds by construction.

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

#include "grasscurve/exterior.hpp"

namespace grasscurve {

using CoeffBlock = Eigen::Matrix<cplx, 2, Eigen::Dynamic>;

inline constexpr double kDefaultCcTol = 1e-10;
inline constexpr double kDefaultRankTol = 1e-8;

class Curve {
 public:
  /// n: target is G(2, n+2). d: claimed degree. blocks[alpha-1] = A_alpha.
  Curve(int n, int d, std::vector<CoeffBlock> blocks);

  /// All-zero curve with deg_max coefficient blocks.
  static Curve zero(int n, int d, int deg_max);

  int n() const { return n_; }
  int d() const { return d_; }
  /// Number of stored coefficient blocks (highest alpha present).
  int deg_max() const { return static_cast<int>(blocks_.size()); }
  /// Highest alpha with a nonzero block; 0 for the zero curve.
  int poly_degree() const;

  /// A_alpha, 1-based; zero block for alpha beyond deg_max.
  CoeffBlock block(int alpha) const;
  const std::vector<CoeffBlock>& blocks() const { return blocks_; }

  MultiVec a1(int alpha) const;
  MultiVec a2(int alpha) const;

  /// Same coefficients, different claimed degree.
  Curve with_degree(int d) const;

  /// Largest |entry| over all blocks.
  double coeff_scale() const;

 private:
  int n_;
  int d_;
  std::vector<CoeffBlock> blocks_;
};

/// The coefficient vectors W_alpha = (a_1^(alpha), a_2^(alpha)) in C^{2n} and
/// the wedge coefficients V_p = sum_{alpha+beta=p} a_1^(alpha) ^ a_2^(beta).
struct CoeffVectors {
  int n = 0;
  int span = 0;  ///< W runs over alpha = 1..span, V over p = 1..2*span.
  std::vector<Eigen::VectorXcd> w;  ///< w[alpha-1]
  std::vector<MultiVec> v;          ///< v[p-1]

  const Eigen::VectorXcd& W(int alpha) const { return w.at(alpha - 1); }
  const MultiVec& V(int p) const { return v.at(p - 1); }
};

CoeffVectors coefficient_vectors(const Curve& c);

/// Hermitian coefficient matrix of |Pl o f|^2 against its binomial target.
struct GramReport {
  /// actual(p,q) = coefficient of z^p zbar^q in 1 + |F_1|^2 + |F_2|^2 + |F_1^F_2|^2.
  Eigen::MatrixXcd actual;
  /// residual(p,q) = actual(p,q) - delta_pq C(d,p).
  Eigen::MatrixXcd residual;
  double max_abs = 0.0;
  double frobenius = 0.0;
  bool is_cc = false;
};

GramReport gram_residual(const Curve& c, double tol = kDefaultCcTol);

/// Numerical rank of the stacked rows a_1^(alpha), a_2^(alpha): singular
/// values above tol * (largest singular value).
int fullness_rank(const Curve& c, double tol = kDefaultRankTol);

struct VerifyReport {
  bool is_cc = false;
  bool is_full = false;
  bool degree_ok = false;  ///< d <= C(n+2,2) - 1
  /// False when deg F exceeds d or the Gram diagonal matches a different degree.
  bool degree_consistent = false;
  /// Degree whose binomial targets the Gram matrix meets, if any.
  std::optional<int> implied_degree;
  double max_residual = 0.0;
  int fullness_rank = 0;

  bool passed() const { return is_cc && is_full && degree_ok; }
};

VerifyReport verify(const Curve& c, double tol = kDefaultCcTol, double rank_tol = kDefaultRankTol);

/// F(z) as a 2 x n matrix (Horner).
CoeffBlock evaluate(const Curve& c, cplx z);

/// (1, F_2(z), -F_1(z), (F_1^F_2)(z)): the Pluecker coordinates of [I_2, F(z)]
/// in lexicographic order of Lambda^2 C^{n+2}.
Eigen::VectorXcd plucker(const Curve& c, cplx z);

}  // namespace grasscurve
