#include "grasscurve/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "grasscurve/errors.hpp"

namespace grasscurve {

namespace {

using lcplx = std::complex<long double>;

// Polynomial (in z) with MultiVec coefficients of one grade.
using MultiPoly = std::vector<MultiVec>;

MultiPoly zero_poly(int n, int grade, int num_powers) {
  return MultiPoly(static_cast<std::size_t>(std::max(num_powers, 0)), MultiVec(n, grade));
}

// out[i+j] += x[i] ^ y[j]
void convolve_wedge(const MultiPoly& x, const MultiPoly& y, MultiPoly& out) {
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].is_zero()) continue;
    for (std::size_t j = 0; j < y.size(); ++j) {
      if (y[j].is_zero()) continue;
      wedge_accumulate(x[i], y[j], 1.0, out[i + j]);
    }
  }
}

struct Blocks {
  MultiPoly r, s, t, x;
};

Blocks g_blocks(const Curve& c) {
  const int n = c.n();
  const int D = c.deg_max();
  Blocks b;
  if (D == 0) return b;

  // dF_i has z^k coefficient (k+1) a_i^(k+1); F_i has z^alpha coefficient a_i^(alpha).
  MultiPoly d1 = zero_poly(n, 1, D), d2 = zero_poly(n, 1, D);
  MultiPoly f1 = zero_poly(n, 1, D + 1), f2 = zero_poly(n, 1, D + 1);
  for (int alpha = 1; alpha <= D; ++alpha) {
    f1[alpha] = c.a1(alpha);
    f2[alpha] = c.a2(alpha);
    d1[alpha - 1] = static_cast<double>(alpha) * f1[alpha];
    d2[alpha - 1] = static_cast<double>(alpha) * f2[alpha];
  }
  MultiPoly v = zero_poly(n, 2, 2 * D + 1);
  convolve_wedge(f1, f2, v);

  b.r = zero_poly(n, 2, 2 * D - 1);
  convolve_wedge(d1, d2, b.r);
  b.s = zero_poly(n, 3, 3 * D);
  b.t = zero_poly(n, 3, 3 * D);
  b.x = zero_poly(n, 4, 4 * D);
  if (n >= 3) {
    convolve_wedge(b.r, f1, b.s);
    convolve_wedge(b.r, f2, b.t);
  }
  if (n >= 4) convolve_wedge(b.r, v, b.x);
  return b;
}

double factorial_ratio(int p, int a) {
  // p! / (p-a)!
  double r = 1.0;
  for (int i = 0; i < a; ++i) r *= p - i;
  return r;
}

}  // namespace

PolyVec g_vector(const Curve& c) {
  const int n = c.n();
  const auto c2 = static_cast<std::size_t>(binomial(n, 2));
  const auto c3 = static_cast<std::size_t>(binomial(n, 3));
  const auto c4 = static_cast<std::size_t>(binomial(n, 4));
  const std::size_t len = c2 + 2 * c3 + c4;
  PolyVec g(len);
  const Blocks b = g_blocks(c);
  const std::size_t powers = b.x.size();
  for (std::size_t k = 0; k < powers; ++k) {
    std::vector<cplx> block(len, cplx{});
    auto put = [&](const MultiPoly& p, std::size_t offset) {
      if (k >= p.size()) return;
      for (std::size_t i = 0; i < p[k].size(); ++i) block[offset + i] = p[k][i];
    };
    put(b.r, 0);
    put(b.s, c2);
    put(b.t, c2 + c3);
    put(b.x, c2 + 2 * c3);
    g.push_back(std::move(block));
  }
  g.trim(0.0);
  return g;
}

PolyVec wronskian_wedge(const Curve& c) {
  const auto len = static_cast<std::size_t>(binomial(c.n(), 2));
  PolyVec out(len);
  for (const auto& m : g_blocks(c).r) out.push_back(std::vector<cplx>(m.coeffs().begin(), m.coeffs().end()));
  out.trim(0.0);
  return out;
}

double det_a1_sq(const Curve& c, cplx z) {
  if (c.d() < 2) throw DomainError("det_a1_sq: requires d >= 2");
  const Eigen::VectorXcd gz = g_vector(c).evaluate(z);
  const double d = c.d();
  return gz.squaredNorm() / (d * d * std::pow(1.0 + std::norm(z), 2 * c.d() - 4));
}

// ------------------------------------------------------------ ramification

std::vector<cplx> polynomial_roots(std::span<const cplx> coeffs) {
  int deg = static_cast<int>(coeffs.size()) - 1;
  while (deg >= 0 && coeffs[deg] == cplx{}) --deg;
  if (deg < 0) throw InputError("polynomial_roots: zero polynomial");
  if (deg == 0) return {};
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -coeffs[i] / coeffs[deg];
  const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  const auto& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

namespace {

struct Component {
  std::vector<cplx> coeffs;  // normalized to max |c| = 1, trailing zeros stripped
  int degree = 0;
  std::vector<cplx> roots;   // exact zeros at the origin first
};

struct ClusterResult {
  std::vector<RootMultiplicity> zeros;
  int content = 0;
};

ClusterResult cluster_common_roots(const std::vector<Component>& comps, std::size_t pivot,
                                   double radius) {
  ClusterResult out;
  std::vector<std::vector<bool>> used(comps.size());
  for (std::size_t c = 0; c < comps.size(); ++c) used[c].assign(comps[c].roots.size(), false);

  const auto& proots = comps[pivot].roots;
  for (std::size_t i = 0; i < proots.size(); ++i) {
    if (used[pivot][i]) continue;
    const double rad_i = radius * std::max(1.0, std::abs(proots[i]));
    cplx sum{};
    int m = 0;
    for (std::size_t j = i; j < proots.size(); ++j) {
      if (!used[pivot][j] && std::abs(proots[j] - proots[i]) <= rad_i) {
        used[pivot][j] = true;
        sum += proots[j];
        ++m;
      }
    }
    const cplx centroid = sum / static_cast<double>(m);
    const double rad_c = radius * std::max(1.0, std::abs(centroid));
    int common = m;
    for (std::size_t c = 0; c < comps.size(); ++c) {
      if (c == pivot) continue;
      int count = 0;
      for (std::size_t j = 0; j < comps[c].roots.size(); ++j) {
        if (!used[c][j] && std::abs(comps[c].roots[j] - centroid) <= rad_c) {
          used[c][j] = true;
          ++count;
        }
      }
      common = std::min(common, count);
    }
    if (common > 0) {
      // The origin is kept exact when it came from stripped zero coefficients.
      out.zeros.push_back({std::abs(centroid) <= rad_c * 1e-3 ? cplx{} : centroid, common});
      out.content += common;
    }
  }
  return out;
}

// The k pivot roots that lie closest to a root of every other component.
ClusterResult nearest_common_roots(const std::vector<Component>& comps, std::size_t pivot, int k) {
  const auto& proots = comps[pivot].roots;
  std::vector<std::pair<double, std::size_t>> score;
  for (std::size_t i = 0; i < proots.size(); ++i) {
    double worst = 0.0;
    for (std::size_t c = 0; c < comps.size(); ++c) {
      if (c == pivot) continue;
      double best = std::numeric_limits<double>::infinity();
      for (const cplx r : comps[c].roots) best = std::min(best, std::abs(r - proots[i]));
      worst = std::max(worst, best / std::max(1.0, std::abs(proots[i])));
    }
    score.emplace_back(worst, i);
  }
  std::sort(score.begin(), score.end());
  ClusterResult out;
  for (int j = 0; j < k && j < static_cast<int>(score.size()); ++j) {
    out.zeros.push_back({proots[score[j].second], 1});
    ++out.content;
  }
  return out;
}

// Degree of the common factor from the rank of the generalized Sylvester matrix.
int sylvester_content(const std::vector<Component>& comps, const RamificationOptions& opts,
                      double& condition) {
  condition = std::numeric_limits<double>::infinity();
  std::size_t lead = 0;
  for (std::size_t c = 1; c < comps.size(); ++c) {
    if (comps[c].degree > comps[lead].degree) lead = c;
  }
  const int a = comps[lead].degree;
  int b = 0;
  for (std::size_t c = 0; c < comps.size(); ++c) {
    if (c != lead) b = std::max(b, comps[c].degree);
  }
  if (a == 0 || b == 0) return 0;

  const int cols = a + b;
  const int rows = b + static_cast<int>(comps.size() - 1) * a;
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(rows, cols);
  int row = 0;
  auto place = [&](const Component& p, int shifts) {
    for (int i = 0; i < shifts; ++i, ++row) {
      for (int k = 0; k <= p.degree; ++k) s(row, i + k) = p.coeffs[k];
    }
  };
  place(comps[lead], b);
  for (std::size_t c = 0; c < comps.size(); ++c) {
    if (c != lead) place(comps[c], a);
  }
  const Eigen::BDCSVD<Eigen::MatrixXcd> svd(s);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > opts.sylvester_tol * sv(0)) ++rank;
  }
  const int above = rank;
  double widest = opts.gap_ratio;
  for (Eigen::Index i = 1; i < above; ++i) {
    if (sv(i) > opts.gap_ceiling * sv(0)) continue;
    const double ratio = sv(i - 1) / sv(i);
    if (ratio >= widest) {
      widest = ratio;
      rank = static_cast<int>(i);
    }
  }
  if (rank > 0 && rank < sv.size()) {
    condition = sv(rank - 1) / std::max(sv(rank), std::numeric_limits<double>::min());
  }
  return cols - rank;
}

}  // namespace

RamificationReport ramification_of(const PolyVec& g, int d, double scale,
                                   const RamificationOptions& opts) {
  if (d < 2) throw DomainError("ramification: requires d >= 2");
  RamificationReport rep;
  const double gmax = g.max_abs();
  if (gmax <= opts.degeneracy_tol * scale) {
    rep.degenerate = true;
    return rep;
  }

  const int top = 2 * d - 4;
  std::vector<Component> comps;
  for (std::size_t i = 0; i < g.length(); ++i) {
    std::vector<cplx> p = g.component(i);
    for (std::size_t k = 0; k < p.size(); ++k) {
      const bool over = static_cast<int>(k) > top;
      if (std::abs(p[k]) > (over ? opts.overflow_trim : opts.trim_tol) * gmax) continue;
      p[k] = cplx{};
    }
    while (!p.empty() && p.back() == cplx{}) p.pop_back();
    if (p.empty()) continue;
    double m = 0.0;
    for (const auto& x : p) m = std::max(m, std::abs(x));
    for (auto& x : p) x /= m;
    Component comp;
    comp.degree = static_cast<int>(p.size()) - 1;
    int zeros = 0;
    while (p[zeros] == cplx{}) ++zeros;
    comp.roots.assign(zeros, cplx{});
    const auto rest = polynomial_roots(std::span<const cplx>(p).subspan(zeros));
    comp.roots.insert(comp.roots.end(), rest.begin(), rest.end());
    comp.coeffs = std::move(p);
    comps.push_back(std::move(comp));
  }

  for (const auto& c : comps) rep.max_component_degree = std::max(rep.max_component_degree, c.degree);
  rep.degree_overflow = rep.max_component_degree > top;
  rep.zero_at_infinity_mult = std::max(0, top - rep.max_component_degree);

  std::size_t pivot = 0;
  for (std::size_t c = 1; c < comps.size(); ++c) {
    if (comps[c].degree < comps[pivot].degree) pivot = c;
  }

  ClusterResult clusters;
  if (comps.size() == 1) {
    rep.sylvester_content_degree = comps[0].degree;
    rep.gcd_condition = std::numeric_limits<double>::infinity();
    clusters = cluster_common_roots(comps, pivot, opts.cluster_radius);
    rep.cluster_radius_used = opts.cluster_radius;
  } else {
    rep.sylvester_content_degree = sylvester_content(comps, opts, rep.gcd_condition);
    bool agreed = false;
    for (double radius = opts.cluster_radius; radius <= 1e-2 * (1 + 1e-12); radius *= 10.0) {
      clusters = cluster_common_roots(comps, pivot, radius);
      rep.cluster_radius_used = radius;
      if (clusters.content == rep.sylvester_content_degree) {
        agreed = true;
        break;
      }
    }
    if (!agreed) {
      clusters = nearest_common_roots(comps, pivot, rep.sylvester_content_degree);
      rep.cluster_radius_used = opts.cluster_radius;
    }
    rep.ill_conditioned = !agreed || rep.cluster_radius_used > opts.cluster_radius;
  }

  rep.finite_zeros = std::move(clusters.zeros);
  rep.content_degree = clusters.content;
  rep.deg_g = rep.max_component_degree - rep.content_degree;
  rep.r_index = rep.zero_at_infinity_mult + rep.content_degree;
  return rep;
}

RamificationReport ramification(const Curve& c, const RamificationOptions& opts) {
  const double s = c.coeff_scale();
  return ramification_of(g_vector(c), c.d(), s * s, opts);
}

RamificationReport ramification(const Curve& c, double degeneracy_tol) {
  RamificationOptions opts;
  opts.degeneracy_tol = degeneracy_tol;
  return ramification(c, opts);
}

// ----------------------------------------------------------------- metric

KahlerPotential::KahlerPotential(const Curve& c) : coeffs_(gram_residual(c).actual) {}

std::complex<long double> KahlerPotential::partial(cplx z, int a, int b) const {
  const auto size = static_cast<int>(coeffs_.rows());
  const lcplx zl(z.real(), z.imag());
  const lcplx zb = std::conj(zl);
  std::vector<lcplx> zp(size, 1.0L), zbp(size, 1.0L);
  for (int k = 1; k < size; ++k) {
    zp[k] = zp[k - 1] * zl;
    zbp[k] = zbp[k - 1] * zb;
  }
  lcplx acc{};
  for (int p = a; p < size; ++p) {
    lcplx row{};
    for (int q = b; q < size; ++q) {
      const cplx m = coeffs_(p, q);
      if (m == cplx{}) continue;
      row += lcplx(m.real(), m.imag()) * static_cast<long double>(factorial_ratio(q, b)) * zbp[q - b];
    }
    acc += row * static_cast<long double>(factorial_ratio(p, a)) * zp[p - a];
  }
  return acc;
}

long double KahlerPotential::value(cplx z) const { return partial(z, 0, 0).real(); }

double KahlerPotential::metric_density(cplx z) const {
  const long double p = partial(z, 0, 0).real();
  const lcplx pz = partial(z, 1, 0);
  const long double pzzb = partial(z, 1, 1).real();
  const long double n = p * pzzb - std::norm(pz);
  return static_cast<double>(n / (p * p));
}

double KahlerPotential::curvature(cplx z) const {
  const long double p = partial(z, 0, 0).real();
  const lcplx pz = partial(z, 1, 0);
  const lcplx pzz = partial(z, 2, 0);
  const long double pzzb = partial(z, 1, 1).real();
  const lcplx pzzzb = partial(z, 2, 1);
  const long double pzzzbzb = partial(z, 2, 2).real();

  // log lambda^2 = log N - 2 log P with N = P P_{z zbar} - |P_z|^2.
  const long double n = p * pzzb - std::norm(pz);
  const long double density = n / (p * p);
  if (!(density > 1e-12L)) {
    throw DomainError("curvature_at: metric degenerates at z = (" + std::to_string(z.real()) +
                      ", " + std::to_string(z.imag()) + "), not an immersion point");
  }
  const lcplx nz = p * pzzzb - pzz * std::conj(pz);
  const long double nzzb = p * pzzzbzb - std::norm(pzz);
  const long double k = 4.0L - 2.0L * p * p * (n * nzzb - std::norm(nz)) / (n * n * n);
  return static_cast<double>(k);
}

double curvature_at(const Curve& c, cplx z) { return KahlerPotential(c).curvature(z); }

double gauss_slack(const Curve& c, cplx z) {
  return 4.0 - curvature_at(c, z) - 8.0 * det_a1_sq(c, z);
}

// ------------------------------------------------------- lower-bound checks

MultiVec lemma_q(int d, int rho, std::span<const cplx> lambda, std::span<const MultiVec> a1) {
  if (rho < 1 || rho > d) throw InputError("lemma_q: need 1 <= rho <= d");
  if (a1.empty()) throw InputError("lemma_q: no a1 vectors supplied");
  const int n = a1.front().dim();
  auto vec = [&](int alpha) -> const MultiVec& {
    if (alpha < 1 || alpha > static_cast<int>(a1.size())) {
      throw InputError("lemma_q: missing a1^(" + std::to_string(alpha) + ")");
    }
    const MultiVec& v = a1[alpha - 1];
    if (v.grade() != 1 || v.dim() != n) throw InputError("lemma_q: a1 vectors must be grade 1 in C^n");
    return v;
  };
  auto lam = [&](int index) {
    if (index < 0 || index >= static_cast<int>(lambda.size())) {
      throw InputError("lemma_q: missing lambda_" + std::to_string(index));
    }
    return lambda[index];
  };
  MultiVec q(n, 2);
  for (int k = 1; k <= d - rho - 1; ++k) {
    for (int j = 0; j <= k - 1; ++j) {
      wedge_accumulate(vec(rho + k), vec(d - k + j), lam(d - j), q);
    }
  }
  return q;
}

LemmaQStats lemma_q_trials(int trials, std::uint64_t seed, int d_min, int d_max, int n_min, int n_max) {
  if (trials < 0 || d_min < 1 || d_max < d_min || n_min < 1 || n_max < n_min) {
    throw InputError("lemma_q_trials: invalid ranges");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  auto gauss = [&] {
    const double re = normal(rng);
    const double im = normal(rng);
    return cplx(re, im);
  };
  const int nd = d_max - d_min + 1;
  const int nn = n_max - n_min + 1;
  LemmaQStats stats;
  for (int t = 0; t < trials; ++t) {
    const int d = d_min + t % nd;
    const int n = n_min + (t / nd) % nn;
    const int rho = 1 + (t / (nd * nn)) % d;
    std::vector<cplx> lambda(d + 1);
    double lam_max = 0.0;
    for (auto& l : lambda) {
      l = gauss();
      lam_max = std::max(lam_max, std::abs(l));
    }
    std::vector<MultiVec> a1;
    double a_max = 0.0;
    for (int alpha = 1; alpha <= d; ++alpha) {
      std::vector<cplx> v(n);
      for (auto& x : v) x = gauss();
      a1.push_back(MultiVec::from_vector(v));
      a_max = std::max(a_max, a1.back().max_abs());
    }
    const double rel = lemma_q(d, rho, lambda, a1).norm() / (lam_max * a_max * a_max);
    if (rel >= stats.max_relative) {
      stats.max_relative = rel;
      stats.worst_d = d;
      stats.worst_rho = rho;
      stats.worst_n = n;
    }
    ++stats.trials;
  }
  return stats;
}

TailProbe tail_probe(const Curve& c, double tol) {
  TailProbe out;
  const int d = c.d();
  out.fullness_rank = fullness_rank(c);
  out.dim_bound_ok = out.fullness_rank <= d;
  out.cc_ok = gram_residual(c).max_abs <= tol;

  const int D = std::max(d, c.deg_max());
  int tau = 0;
  for (int alpha = D; alpha >= 1; --alpha) {
    if (c.block(alpha).norm() > tol) {
      tau = alpha;
      break;
    }
  }
  out.tau = tau;
  out.tau_ok = tau >= (d + 1) / 2 && tau <= d;
  out.rho_min = d - tau + 1;
  if (!out.tau_ok) return out;

  // Swapping F1 and F2 is a unitary frame change; it keeps V_sigma = 0 and L.
  out.rows_swapped = c.a1(tau).norm() < c.a2(tau).norm();
  auto first = [&](int alpha) { return out.rows_swapped ? c.a2(alpha) : c.a1(alpha); };
  auto second = [&](int alpha) { return out.rows_swapped ? c.a1(alpha) : c.a2(alpha); };

  const MultiVec pivot = first(tau);
  const double pivot_sq = pivot.norm_sq();
  out.lambda.assign(static_cast<std::size_t>(tau - out.rho_min + 1), cplx{});
  for (int rho = tau; rho >= out.rho_min; --rho) {
    MultiVec r = second(rho);
    for (int k = 0; k <= tau - rho - 1; ++k) r -= out.lambda_at(tau - k) * first(rho + k);
    const cplx lam = herm_inner(r, pivot) / pivot_sq;
    out.lambda.at(rho - out.rho_min) = lam;
    r -= lam * pivot;
    out.residual = std::max(out.residual, r.norm());
  }
  return out;
}

}  // namespace grasscurve
