#pragma once

// Damped least-squares feasibility search for the constant-curvature system
// on the coefficient vectors W_1..W_d in C^{2n}.

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "grasscurve/curve.hpp"

namespace grasscurve {

using WVectors = std::vector<Eigen::VectorXcd>;

/// W_alpha = (a1^(alpha), a2^(alpha)) for alpha = 1..d.
WVectors w_vectors(const Curve& c);
Curve curve_from_w(int n, int d, const WVectors& w);

/// Real residual vector, in this order:
///   Re/Im of every entry of V_beta, beta in {1} U {d+1..2d};
///   |W_a|^2 + |V_a|^2 - C(d,a), a = 1..d;
///   Re/Im of <W_a,W_b> + <V_a,V_b>, 1 <= a < b <= d.
/// d = w.size(), n = w[0].size() / 2.
Eigen::VectorXd residuals(const WVectors& w);

/// d residuals / d (Re, Im) of W entries. Column of (alpha, i, part) is
/// 2 * ((alpha-1) * 2n + i) + part with part 0 = Re, 1 = Im.
Eigen::MatrixXd jacobian(const WVectors& w);

struct GaugeFix {
  /// a1^(1) = (s, 0, ...), a2^(1) = (0, t, 0, ...) with s, t real.
  bool fix_a1_svd = true;
  /// s = sqrt(d) cos(theta), t = sqrt(d) sin(theta).
  bool fix_scale = true;
};

struct SearchProblem {
  int n = 2;
  int d = 2;
  int restarts = 200;
  int max_iters = 500;
  /// Euclidean norm of the residual vector.
  double tol_feasible = 1e-10;
  GaugeFix gauge;
  std::uint64_t rng_seed = 42;
  /// Worker threads; 0 means hardware concurrency. Always capped by GRASSCURVE_THREADS.
  int threads = 0;
};

struct SearchReport {
  int n = 0;
  int d = 0;
  std::uint64_t seed = 0;
  bool feasible = false;
  /// The feasible curve, or the best full candidate when none is feasible.
  std::optional<Curve> best_curve;
  /// Smallest residual among candidates with fullness rank n (inf if none).
  double best_residual = 0.0;
  /// Smallest residual over all candidates, full or not.
  double best_residual_any = 0.0;
  bool full = false;
  int fullness_rank = 0;
  /// floor(log10 residual) -> number of restarts ending there.
  std::map<int, int> histogram;
  int restarts_run = 0;
  /// 1-based index of the first feasible restart.
  std::optional<int> restarts_to_hit;
  double wall_time = 0.0;
  std::string label;
};

/// Thread count honouring GRASSCURVE_THREADS.
int solver_threads(int requested = 0);

/// Deterministic for a given problem: the reported hit is the lowest-index
/// feasible restart regardless of thread count.
SearchReport search(const SearchProblem& p);

/// Independent search for every d in [d_min, d_max] using p as template.
std::vector<SearchReport> feasibility_scan(int n, int d_min, int d_max, const SearchProblem& p);

}  // namespace grasscurve
