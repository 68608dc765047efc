#pragma once

// Analytic invariants of a curve [I_2, F]: the g-vector and |det A_1|^2,
// ramification, Gauss curvature of the induced metric, the Gauss-equation
// slack, and the two lower-bound identities (the Q double sum and the lambda
// chain on the tail coefficients).

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "grasscurve/curve.hpp"
#include "grasscurve/polyvec.hpp"

namespace grasscurve {

// ---------------------------------------------------------------- g-vector

/// g = (dF1^dF2 | dF1^dF2^F1 | dF1^dF2^F2 | dF1^dF2^F1^F2), blocks laid out
/// in that order with lexicographic tuples inside each block. Length
/// C(n,2) + 2 C(n,3) + C(n,4) = C(n+2,4). Trailing zero powers are trimmed.
PolyVec g_vector(const Curve& c);

/// The dF1^dF2 block alone, as a polynomial in z.
PolyVec wronskian_wedge(const Curve& c);

/// |g(z)|^2 / (d^2 (1+|z|^2)^{2d-4}). Requires d >= 2.
double det_a1_sq(const Curve& c, cplx z);

// ------------------------------------------------------------ ramification

struct RootMultiplicity {
  cplx root;
  int multiplicity = 0;
};

struct RamificationOptions {
  /// g is declared identically zero when every coefficient is below
  /// degeneracy_tol * (largest |A_alpha| entry)^2.
  double degeneracy_tol = 1e-10;
  /// Coefficients below trim_tol * max|g| are treated as zero.
  double trim_tol = 1e-9;
  /// Coefficients above degree 2d - 4 below overflow_trim * max|g| are
  /// treated as zero; that degree bound holds on constantly curved curves.
  double overflow_trim = 1e-3;
  /// Base clustering radius, relative to max(1, |root|).
  double cluster_radius = 1e-6;
  /// Relative singular-value cut for the Sylvester rank cross-check.
  double sylvester_tol = 1e-9;
  /// A drop by gap_ratio between consecutive singular values below
  /// gap_ceiling also marks the rank; it absorbs noise left by the solver.
  double gap_ratio = 1e3;
  double gap_ceiling = 1e-4;
};

struct RamificationReport {
  bool degenerate = false;
  /// 2d-4 - deg([g]); empty when degenerate.
  std::optional<int> r_index;
  /// deg([g]) after removing the common factor of the components.
  int deg_g = 0;
  std::vector<RootMultiplicity> finite_zeros;
  int zero_at_infinity_mult = 0;
  int max_component_degree = -1;
  int content_degree = 0;
  /// Common-factor degree read off the generalized Sylvester matrix.
  int sylvester_content_degree = 0;
  /// sigma_{rank} / sigma_{rank+1} across the Sylvester rank gap (inf if no gap needed).
  double gcd_condition = 0.0;
  double cluster_radius_used = 0.0;
  /// Set when clustering needed a radius above the base one, or never agreed
  /// with the Sylvester rank.
  bool ill_conditioned = false;
  /// Some component has degree above 2d-4 (input is not constantly curved).
  bool degree_overflow = false;
};

RamificationReport ramification(const Curve& c, const RamificationOptions& opts = {});
RamificationReport ramification(const Curve& c, double degeneracy_tol);

/// Same analysis for an explicit g and degree d; scale is the reference
/// magnitude for the degeneracy test.
RamificationReport ramification_of(const PolyVec& g, int d, double scale,
                                   const RamificationOptions& opts = {});

/// Roots of sum_k coeffs[k] z^k (leading coefficient nonzero), via the
/// companion matrix.
std::vector<cplx> polynomial_roots(std::span<const cplx> coeffs);

// ----------------------------------------------------------------- metric

/// P(z, zbar) = det(I_2 + F F^*) = 1 + |F1|^2 + |F2|^2 + |F1^F2|^2 held as its
/// Hermitian coefficient matrix, differentiated exactly.
class KahlerPotential {
 public:
  explicit KahlerPotential(const Curve& c);

  long double value(cplx z) const;
  /// lambda^2 = d/dz d/dzbar log P, the induced metric density.
  double metric_density(cplx z) const;
  /// K = -(2/lambda^2) d/dz d/dzbar log lambda^2. Throws DomainError when
  /// lambda^2 <= 1e-12 (not an immersion at z).
  double curvature(cplx z) const;

 private:
  // Returns d^a/dz^a d^b/dzbar^b P at z.
  std::complex<long double> partial(cplx z, int a, int b) const;

  Eigen::MatrixXcd coeffs_;
};

double curvature_at(const Curve& c, cplx z);

/// 4 - K(z) - 8 |det A_1|^2(z), i.e. |A|^2/2 on a constantly curved curve.
double gauss_slack(const Curve& c, cplx z);

// ------------------------------------------------------- lower-bound checks

/// sum_{k=1}^{d-rho-1} sum_{j=0}^{k-1} lambda_{d-j} a1^(rho+k) ^ a1^(d-k+j).
/// lambda[i] holds lambda_i (so lambda needs indices up to d); a1[alpha-1]
/// holds a_1^(alpha). Throws InputError when a referenced index is missing.
MultiVec lemma_q(int d, int rho, std::span<const cplx> lambda, std::span<const MultiVec> a1);

struct LemmaQStats {
  int trials = 0;
  /// max over trials of |Q| / (max|lambda| * max|a1|^2).
  double max_relative = 0.0;
  int worst_d = 0;
  int worst_rho = 0;
  int worst_n = 0;
};

/// Evaluates lemma_q on random complex data, cycling d over [d_min, d_max],
/// n over [n_min, n_max] and rho over 1..d so every combination is visited.
LemmaQStats lemma_q_trials(int trials, std::uint64_t seed, int d_min = 3, int d_max = 9, int n_min = 2,
                           int n_max = 4);

struct TailProbe {
  int tau = 0;
  /// lambda[i] = lambda_{rho_min + i}, rho_min = d - tau + 1.
  int rho_min = 0;
  std::vector<cplx> lambda;
  /// Largest deviation |a2^(rho) - sum_j lambda_{tau-j} a1^(rho+j)| along the chain.
  double residual = 0.0;
  int fullness_rank = 0;
  bool dim_bound_ok = false;  ///< fullness_rank <= d
  bool tau_ok = false;        ///< ceil(d/2) <= tau <= d
  bool cc_ok = false;         ///< Gram residual within tol
  bool rows_swapped = false;  ///< F1 and F2 exchanged so that a1^(tau) dominates

  cplx lambda_at(int index) const { return lambda.at(index - rho_min); }
};

/// Resolves the lambda chain a2^(rho) = sum_{j=0}^{tau-rho} lambda_{tau-j} a1^(rho+j)
/// for rho = tau down to d - tau + 1.
TailProbe tail_probe(const Curve& c, double tol = 1e-8);

}  // namespace grasscurve
