// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "grasscurve/families.hpp"
#include "grasscurve/gauge.hpp"
#include "grasscurve/invariants.hpp"
#include "grasscurve/solver.hpp"
#include "test_support.hpp"

using namespace grasscurve;

namespace {

constexpr double kFamilyResidual = 1e-12;
constexpr double kCurvatureTol = 1e-8;
constexpr double kSlackFloor = -1e-8;
constexpr double kFeasibleTol = 1e-10;
constexpr double kInfeasibleFloor = 1e-4;
constexpr double kProbeResidual = 1e-8;
constexpr double kLemmaQTol = 1e-11;
constexpr double kInvarianceDrift = 1e-9;
constexpr double kGramAgreement = 1e-12;
constexpr double kJacobianRel = 1e-6;
constexpr double kCurvatureFdRel = 1e-6;
constexpr int kRestarts = 200;
constexpr std::uint64_t kSeed = 42;
constexpr int kSamples = 50;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail = what;
      pass = false;
    }
  }
};

std::vector<Curve> family_curves() {
  std::vector<Curve> out;
  for (int n = 2; n <= 6; ++n) out.push_back(family_dn(n));
  for (int n = 2; n <= 5; ++n) out.push_back(family_d2n(n));
  return out;
}

std::string cell(int n, int d) { return "(n=" + std::to_string(n) + ", d=" + std::to_string(d) + ")"; }

// Scan results shared by criteria 3, 4, 5 and 7.
struct ScanData {
  std::vector<SearchReport> n2, n3;
  double seconds = 0.0;
};

const ScanData& scans() {
  static const ScanData data = [] {
    SearchProblem p;
    p.restarts = kRestarts;
    p.rng_seed = kSeed;
    p.tol_feasible = kFeasibleTol;
    const auto t0 = Clock::now();
    ScanData s;
    s.n2 = feasibility_scan(2, 1, 5, p);
    s.n3 = feasibility_scan(3, 2, 9, p);
    s.seconds = seconds_since(t0);
    return s;
  }();
  return data;
}

std::vector<const SearchReport*> all_cells() {
  std::vector<const SearchReport*> out;
  for (const auto& r : scans().n2) out.push_back(&r);
  for (const auto& r : scans().n3) out.push_back(&r);
  return out;
}

bool expected_feasible(int n, int d) { return n == 2 ? (d >= 2 && d <= 4) : (d >= 3 && d <= 6); }

// ------------------------------------------------------------------ criteria

Outcome families() {
  Outcome o;
  const auto t0 = Clock::now();
  for (int n = 2; n <= 6; ++n) {
    const auto r = verify(family_dn(n), kFamilyResidual);
    o.require(r.passed() && r.max_residual <= kFamilyResidual && r.fullness_rank == n && family_dn(n).d() == n,
              "family_dn(" + std::to_string(n) + ")");
  }
  for (int n = 2; n <= 5; ++n) {
    const auto r = verify(family_d2n(n), kFamilyResidual);
    o.require(r.passed() && r.max_residual <= kFamilyResidual && r.fullness_rank == n && family_d2n(n).d() == 2 * n,
              "family_d2n(" + std::to_string(n) + ")");
  }
  const double secs = seconds_since(t0);
  o.require(secs < 1.0, "runtime " + std::to_string(secs) + " s");
  if (o.pass) o.detail = "9 curves, " + std::to_string(secs) + " s";
  return o;
}

Outcome curvature_sampling() {
  Outcome o;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(kSeed);
  double worst_k = 0.0, worst_slack = 1e300;
  for (const Curve& c : family_curves()) {
    const KahlerPotential kp(c);
    for (int i = 0; i < kSamples; ++i) {
      const cplx z = support::random_point(rng, 2.0);
      worst_k = std::max(worst_k, std::abs(kp.curvature(z) - 4.0 / c.d()));
      worst_slack = std::min(worst_slack, 4.0 - kp.curvature(z) - 8.0 * det_a1_sq(c, z));
    }
  }
  const double secs = seconds_since(t0);
  o.require(worst_k <= kCurvatureTol, "max |K - 4/d| = " + std::to_string(worst_k));
  o.require(worst_slack >= kSlackFloor, "min slack = " + std::to_string(worst_slack));
  o.require(secs < 5.0, "runtime " + std::to_string(secs) + " s");
  if (o.pass) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "max |K-4/d| = %.2e, min slack = %.3g, %.2f s", worst_k, worst_slack, secs);
    o.detail = buf;
  }
  return o;
}

Outcome existence() {
  Outcome o;
  for (const auto* r : all_cells()) {
    if (!expected_feasible(r->n, r->d)) continue;
    o.require(r->feasible && r->best_residual <= kFeasibleTol && r->full, cell(r->n, r->d) + " not found");
  }
  o.require(scans().seconds < 600.0, "scan runtime " + std::to_string(scans().seconds) + " s");
  if (o.pass) o.detail = "all 7 window cells found, scans took " + std::to_string(scans().seconds) + " s";
  return o;
}

Outcome non_existence() {
  Outcome o;
  std::string summary;
  for (const auto* r : all_cells()) {
    if (expected_feasible(r->n, r->d)) continue;
    const bool label = r->label.find("search evidence, not proof") != std::string::npos;
    o.require(!r->feasible, cell(r->n, r->d) + " reported feasible");
    o.require(r->best_residual > kInfeasibleFloor,
              cell(r->n, r->d) + " best full residual " + std::to_string(r->best_residual));
    o.require(label, cell(r->n, r->d) + " label missing");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s%s %.3g", summary.empty() ? "" : ", ", cell(r->n, r->d).c_str(),
                  r->best_residual);
    summary += buf;
  }
  if (o.pass) o.detail = "best residuals " + summary;
  return o;
}

Outcome lower_bound() {
  Outcome o;
  int probed = 0;
  for (const auto* r : all_cells()) {
    if (!r->feasible) continue;
    o.require(r->d >= r->n, cell(r->n, r->d) + " feasible below d = n");
    const auto p = tail_probe(*r->best_curve);
    o.require(p.dim_bound_ok, cell(r->n, r->d) + " dim bound");
    o.require(p.residual <= kProbeResidual, cell(r->n, r->d) + " chain residual " + std::to_string(p.residual));
    ++probed;
  }
  o.require(probed > 0, "no feasible cells to probe");
  if (o.pass) o.detail = std::to_string(probed) + " found curves probed";
  return o;
}

Outcome lemma_q_check() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto stats = lemma_q_trials(1000, kSeed, 3, 9, 2, 4);
  const double secs = seconds_since(t0);
  o.require(stats.trials == 1000, "trial count");
  o.require(stats.max_relative <= kLemmaQTol, "max |Q|/scale = " + std::to_string(stats.max_relative));
  o.require(secs < 5.0, "runtime " + std::to_string(secs) + " s");
  if (o.pass) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "max |Q|/scale = %.2e over 1000 trials, %.2f s", stats.max_relative, secs);
    o.detail = buf;
  }
  return o;
}

Outcome ramification_check() {
  Outcome o;
  int checked = 0;
  for (const auto* r : all_cells()) {
    if (!r->feasible) continue;
    const auto rep = ramification(*r->best_curve);
    if (rep.degenerate) continue;
    const int top = 2 * r->d - 4;
    o.require(*rep.r_index >= 0 && *rep.r_index <= top, cell(r->n, r->d) + " r outside [0, 2d-4]");
    if (r->n == 2) o.require(*rep.r_index == top, cell(r->n, r->d) + " r != 2d-4");
    ++checked;
  }
  for (const Curve& c : family_curves()) {
    const double s = c.coeff_scale();
    o.require(g_vector(c).max_abs() <= 1e-12 * s * s * s * s && ramification(c).degenerate,
              "family not degenerate");
  }
  if (o.pass) o.detail = std::to_string(checked) + " non-degenerate found curves, 9 degenerate families";
  return o;
}

Outcome invariance() {
  Outcome o;
  std::mt19937_64 rng(kSeed);
  std::vector<Curve> fixtures = family_curves();
  for (const auto* r : all_cells()) {
    if (r->feasible) fixtures.push_back(*r->best_curve);
  }
  double worst = 0.0;
  for (const Curve& c : fixtures) {
    const double g0 = gram_residual(c).max_abs;
    const int rank0 = fullness_rank(c);
    const auto ram0 = ramification(c);
    for (int step = 0; step < 20; ++step) {
      const Curve moved =
          apply_unitary(apply_mobius(c, support::random_rotation(rng)), support::random_unitary(c.n(), rng));
      const double g = gram_residual(moved).max_abs;
      worst = std::max(worst, std::abs(g - g0));
      o.require(std::abs(g - g0) <= kInvarianceDrift, cell(c.n(), c.d()) + " gram drift " + std::to_string(g - g0));
      o.require(fullness_rank(moved) == rank0, cell(c.n(), c.d()) + " rank changed");
      const auto ram = ramification(moved);
      o.require(ram.degenerate == ram0.degenerate && ram.r_index == ram0.r_index,
                cell(c.n(), c.d()) + " r_index changed at step " + std::to_string(step));
    }
  }
  if (o.pass) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "%zu curves x 20 moves, max gram drift %.2e", fixtures.size(), worst);
    o.detail = buf;
  }
  return o;
}

// Finite-difference helpers for the oracle criterion.
using ld = long double;

ld potential(const Curve& c, ld x, ld y) {
  const std::complex<ld> z(x, y);
  const int n = c.n();
  std::vector<std::complex<ld>> f1(n), f2(n);
  for (int alpha = c.deg_max(); alpha >= 1; --alpha) {
    const CoeffBlock a = c.block(alpha);
    for (int k = 0; k < n; ++k) {
      f1[k] = (f1[k] + std::complex<ld>(a(0, k).real(), a(0, k).imag())) * z;
      f2[k] = (f2[k] + std::complex<ld>(a(1, k).real(), a(1, k).imag())) * z;
    }
  }
  ld p = 1.0L;
  for (int k = 0; k < n; ++k) p += std::norm(f1[k]) + std::norm(f2[k]);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) p += std::norm(f1[i] * f2[j] - f1[j] * f2[i]);
  }
  return p;
}

ld dzdzbar(const std::function<ld(ld, ld)>& f, ld x, ld y, ld h) {
  const ld w[5] = {-1.0L, 16.0L, -30.0L, 16.0L, -1.0L};
  ld lap = 0.0L;
  for (int i = 0; i < 5; ++i) {
    const ld s = (i - 2) * h;
    lap += w[i] * (f(x + s, y) + f(x, y + s));
  }
  return lap / (48.0L * h * h);
}

Outcome oracles() {
  Outcome o;
  std::mt19937_64 rng(kSeed);
  double gram_worst = 0.0, jac_worst = 0.0, curv_worst = 0.0;

  for (int t = 0; t < 100; ++t) {
    const int n = 2 + t % 4;
    const int d = 1 + t % 5;
    const Curve c = support::random_curve(n, d, d, rng);
    const WVectors w = w_vectors(c);
    const Eigen::VectorXd r = residuals(w);
    const auto g = gram_residual(c);
    const auto cv = coefficient_vectors(c);
    std::vector<double> ref;
    std::vector<int> betas{1};
    for (int b = d + 1; b <= 2 * d; ++b) betas.push_back(b);
    for (int b : betas) {
      for (const cplx x : cv.V(b).coeffs()) {
        ref.push_back(x.real());
        ref.push_back(x.imag());
      }
    }
    for (int a = 1; a <= d; ++a) ref.push_back(g.residual(a, a).real());
    for (int a = 1; a <= d; ++a) {
      for (int b = a + 1; b <= d; ++b) {
        ref.push_back(g.residual(a, b).real());
        ref.push_back(g.residual(a, b).imag());
      }
    }
    if (static_cast<std::size_t>(r.size()) != ref.size()) {
      o.require(false, "residual layout mismatch");
      continue;
    }
    double scale = 1.0, diff = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
      scale = std::max(scale, std::abs(ref[i]));
      diff = std::max(diff, std::abs(ref[i] - r(static_cast<Eigen::Index>(i))));
    }
    gram_worst = std::max(gram_worst, diff / scale);
  }
  o.require(gram_worst <= kGramAgreement, "residual vs gram " + std::to_string(gram_worst));

  for (const auto& [n, d] : {std::pair{2, 3}, {3, 4}, {3, 6}}) {
    const WVectors w = w_vectors(support::random_curve(n, d, d, rng));
    const Eigen::MatrixXd J = jacobian(w);
    const double h = 1e-6;
    double diff = 0.0;
    for (int a = 0; a < d; ++a) {
      for (int i = 0; i < 2 * n; ++i) {
        for (int part = 0; part < 2; ++part) {
          WVectors plus = w, minus = w;
          const cplx step = part == 0 ? cplx(h, 0.0) : cplx(0.0, h);
          plus[a](i) += step;
          minus[a](i) -= step;
          const Eigen::VectorXd fd = (residuals(plus) - residuals(minus)) / (2.0 * h);
          diff = std::max(diff, (fd - J.col(2 * (a * 2 * n + i) + part)).cwiseAbs().maxCoeff());
        }
      }
    }
    jac_worst = std::max(jac_worst, diff / std::max(1.0, J.cwiseAbs().maxCoeff()));
  }
  o.require(jac_worst <= kJacobianRel, "jacobian vs FD " + std::to_string(jac_worst));

  for (int t = 0; t < 10; ++t) {
    const Curve c = support::random_curve(2 + t % 3, 2 + t % 2, 2 + t % 2, rng);
    const cplx z = support::random_point(rng, 0.8);
    const auto log_p = [&](ld x, ld y) { return std::log(potential(c, x, y)); };
    const auto log_density = [&](ld x, ld y) { return std::log(dzdzbar(log_p, x, y, 2e-3L)); };
    const ld density = dzdzbar(log_p, z.real(), z.imag(), 2e-3L);
    const double fd = static_cast<double>(-2.0L / density * dzdzbar(log_density, z.real(), z.imag(), 5e-3L));
    const double k = curvature_at(c, z);
    curv_worst = std::max(curv_worst, std::abs(k - fd) / std::max(1.0, std::abs(k)));
  }
  o.require(curv_worst <= kCurvatureFdRel, "curvature vs FD " + std::to_string(curv_worst));

  if (o.pass) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "gram %.1e, jacobian %.1e, curvature %.1e", gram_worst, jac_worst, curv_worst);
    o.detail = buf;
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 family verification", families},
      {"2 constant curvature sampling", curvature_sampling},
      {"3 degree window existence", existence},
      {"4 degree window non-existence (search evidence, not proof)", non_existence},
      {"5 lower bound d >= n", lower_bound},
      {"6 lemma Q vanishes", lemma_q_check},
      {"7 ramification", ramification_check},
      {"8 invariance under congruence moves", invariance},
      {"9 oracle consistency", oracles},
  };
  bool all = true;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    all = all && o.pass;
    std::printf("%s  %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
