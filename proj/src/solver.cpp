#include "grasscurve/solver.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <string>
#include <thread>
#include <utility>

#include "grasscurve/errors.hpp"

namespace grasscurve {

namespace {

constexpr cplx kI{0.0, 1.0};

struct Layout {
  int n = 0;
  int d = 0;
  std::vector<std::pair<int, int>> pairs;  // 0-based i < j, lexicographic
  std::vector<int> v_betas;                // 1, d+1, ..., 2d
  int v_rows = 0;
  int rows = 0;
};

Layout make_layout(const WVectors& w) {
  if (w.empty()) throw InputError("residuals: need at least one W vector");
  const auto width = w.front().size();
  if (width < 2 || width % 2 != 0) throw InputError("residuals: W vectors must have even length 2n");
  for (const auto& v : w) {
    if (v.size() != width) throw InputError("residuals: W vectors differ in length");
  }
  Layout L;
  L.n = static_cast<int>(width / 2);
  L.d = static_cast<int>(w.size());
  for (int i = 0; i < L.n; ++i) {
    for (int j = i + 1; j < L.n; ++j) L.pairs.emplace_back(i, j);
  }
  L.v_betas.push_back(1);
  for (int b = L.d + 1; b <= 2 * L.d; ++b) L.v_betas.push_back(b);
  L.v_rows = 2 * static_cast<int>(L.v_betas.size() * L.pairs.size());
  L.rows = L.v_rows + L.d + L.d * (L.d - 1);
  return L;
}

// v[p] = V_p for p = 0..2d over the pair basis.
std::vector<Eigen::VectorXcd> wedge_coeffs(const WVectors& w, const Layout& L) {
  const auto np = static_cast<Eigen::Index>(L.pairs.size());
  std::vector<Eigen::VectorXcd> v(2 * L.d + 1, Eigen::VectorXcd::Zero(np));
  for (int a = 1; a <= L.d; ++a) {
    const auto& wa = w[a - 1];
    for (int b = 1; b <= L.d; ++b) {
      const auto& wb = w[b - 1];
      auto& out = v[a + b];
      for (Eigen::Index I = 0; I < np; ++I) {
        const auto [i, j] = L.pairs[I];
        out(I) += wa(i) * wb(L.n + j) - wa(j) * wb(L.n + i);
      }
    }
  }
  return v;
}

cplx inner(const Eigen::VectorXcd& u, const Eigen::VectorXcd& v) { return v.dot(u); }

}  // namespace

WVectors w_vectors(const Curve& c) {
  WVectors out;
  for (int alpha = 1; alpha <= c.d(); ++alpha) {
    const CoeffBlock b = c.block(alpha);
    Eigen::VectorXcd w(2 * c.n());
    w << b.row(0).transpose(), b.row(1).transpose();
    out.push_back(std::move(w));
  }
  return out;
}

Curve curve_from_w(int n, int d, const WVectors& w) {
  if (static_cast<int>(w.size()) != d) throw InputError("curve_from_w: need exactly d W vectors");
  std::vector<CoeffBlock> blocks;
  for (const auto& v : w) {
    if (v.size() != 2 * n) throw InputError("curve_from_w: W vectors must have length 2n");
    CoeffBlock b(2, n);
    b.row(0) = v.head(n).transpose();
    b.row(1) = v.tail(n).transpose();
    blocks.push_back(std::move(b));
  }
  return Curve(n, d, std::move(blocks));
}

Eigen::VectorXd residuals(const WVectors& w) {
  const Layout L = make_layout(w);
  const auto v = wedge_coeffs(w, L);
  Eigen::VectorXd r(L.rows);
  int row = 0;
  for (int beta : L.v_betas) {
    for (Eigen::Index I = 0; I < v[beta].size(); ++I) {
      r(row++) = v[beta](I).real();
      r(row++) = v[beta](I).imag();
    }
  }
  for (int a = 1; a <= L.d; ++a) {
    r(row++) = w[a - 1].squaredNorm() + v[a].squaredNorm() - static_cast<double>(binomial(L.d, a));
  }
  for (int a = 1; a <= L.d; ++a) {
    for (int b = a + 1; b <= L.d; ++b) {
      const cplx q = inner(w[a - 1], w[b - 1]) + inner(v[a], v[b]);
      r(row++) = q.real();
      r(row++) = q.imag();
    }
  }
  return r;
}

Eigen::MatrixXd jacobian(const WVectors& w) {
  const Layout L = make_layout(w);
  const int n = L.n, d = L.d;
  const auto np = static_cast<Eigen::Index>(L.pairs.size());
  const auto v = wedge_coeffs(w, L);
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(L.rows, 4 * n * d);
  std::vector<Eigen::VectorXcd> h(2 * d + 1, Eigen::VectorXcd::Zero(np));

  for (int g = 1; g <= d; ++g) {
    for (int k = 0; k < 2 * n; ++k) {
      // h[p] = dV_p / dw, w = entry k of W_g (holomorphic derivative).
      for (auto& hp : h) hp.setZero();
      for (int b = 1; b <= d; ++b) {
        const auto& wb = w[b - 1];
        auto& out = h[g + b];
        for (Eigen::Index I = 0; I < np; ++I) {
          const auto [i, j] = L.pairs[I];
          if (k < n) {
            // e_k ^ a2^(b)
            if (k == i) out(I) += wb(n + j);
            if (k == j) out(I) -= wb(n + i);
          } else {
            // a1^(b) ^ e_{k-n}
            const int m = k - n;
            if (m == j) out(I) += wb(i);
            if (m == i) out(I) -= wb(j);
          }
        }
      }

      const int cx = 2 * ((g - 1) * 2 * n + k);
      const int cy = cx + 1;
      int row = 0;
      for (int beta : L.v_betas) {
        for (Eigen::Index I = 0; I < np; ++I) {
          const cplx hv = h[beta](I);
          J(row, cx) = hv.real();
          J(row, cy) = -hv.imag();
          J(row + 1, cx) = hv.imag();
          J(row + 1, cy) = hv.real();
          row += 2;
        }
      }
      // q = <W_a,W_b> + <V_a,V_b>; c1 is the part linear in the perturbation, c2 the antilinear part.
      auto dq = [&](int a, int b) {
        cplx c1 = inner(h[a], v[b]);
        cplx c2 = inner(v[a], h[b]);
        if (a == g) c1 += std::conj(w[b - 1](k));
        if (b == g) c2 += w[a - 1](k);
        return std::pair<cplx, cplx>{c1 + c2, kI * c1 - kI * c2};
      };
      for (int a = 1; a <= d; ++a) {
        const auto [dx, dy] = dq(a, a);
        J(row, cx) = dx.real();
        J(row, cy) = dy.real();
        ++row;
      }
      for (int a = 1; a <= d; ++a) {
        for (int b = a + 1; b <= d; ++b) {
          const auto [dx, dy] = dq(a, b);
          J(row, cx) = dx.real();
          J(row, cy) = dy.real();
          J(row + 1, cx) = dx.imag();
          J(row + 1, cy) = dy.imag();
          row += 2;
        }
      }
    }
  }
  return J;
}

int solver_threads(int requested) {
  int threads = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::max(threads, 1);
  if (const char* env = std::getenv("GRASSCURVE_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) threads = std::min<long>(threads, cap);
  }
  return threads;
}

namespace {

// Maps the reduced unknowns x to W and back under the chosen gauge.
class Parametrization {
 public:
  Parametrization(int n, int d, GaugeFix gauge) : n_(n), d_(d), gauge_(gauge) {}

  int gauge_vars() const {
    if (!gauge_.fix_a1_svd) return 0;
    return gauge_.fix_scale ? 1 : 2;
  }
  int size() const { return gauge_.fix_a1_svd ? gauge_vars() + 4 * n_ * (d_ - 1) : 4 * n_ * d_; }

  WVectors unpack(const Eigen::VectorXd& x) const {
    WVectors w(d_, Eigen::VectorXcd::Zero(2 * n_));
    int pos = 0;
    int first = 1;
    if (gauge_.fix_a1_svd) {
      const auto [s, t] = st(x);
      w[0](0) = s;
      w[0](n_ + 1) = t;
      pos = gauge_vars();
      first = 2;
    }
    for (int a = first; a <= d_; ++a) {
      for (int k = 0; k < 2 * n_; ++k, pos += 2) w[a - 1](k) = cplx(x(pos), x(pos + 1));
    }
    return w;
  }

  Eigen::MatrixXd reduce(const Eigen::MatrixXd& jw, const Eigen::VectorXd& x) const {
    if (!gauge_.fix_a1_svd) return jw;
    Eigen::MatrixXd jx(jw.rows(), size());
    const Eigen::VectorXd js = jw.col(0);
    const Eigen::VectorXd jt = jw.col(2 * (n_ + 1));
    if (gauge_.fix_scale) {
      const double r = std::sqrt(static_cast<double>(d_));
      jx.col(0) = r * (-std::sin(x(0)) * js + std::cos(x(0)) * jt);
    } else {
      jx.col(0) = js;
      jx.col(1) = jt;
    }
    jx.rightCols(4 * n_ * (d_ - 1)) = jw.rightCols(4 * n_ * (d_ - 1));
    return jx;
  }

  Eigen::VectorXd initial(std::mt19937_64& rng) const {
    std::normal_distribution<double> normal;
    WVectors w(d_, Eigen::VectorXcd(2 * n_));
    for (int a = 1; a <= d_; ++a) {
      for (int k = 0; k < 2 * n_; ++k) {
        const double re = normal(rng);
        const double im = normal(rng);
        w[a - 1](k) = cplx(re, im);
      }
      w[a - 1] *= std::sqrt(static_cast<double>(binomial(d_, a))) / w[a - 1].norm();
    }
    Eigen::VectorXd x(size());
    int pos = 0;
    int first = 1;
    if (gauge_.fix_a1_svd) {
      const double s = w[0].head(n_).norm();
      const double t = w[0].tail(n_).norm();
      if (gauge_.fix_scale) {
        x(0) = std::atan2(t, s);
      } else {
        x(0) = s;
        x(1) = t;
      }
      pos = gauge_vars();
      first = 2;
    }
    for (int a = first; a <= d_; ++a) {
      for (int k = 0; k < 2 * n_; ++k, pos += 2) {
        x(pos) = w[a - 1](k).real();
        x(pos + 1) = w[a - 1](k).imag();
      }
    }
    return x;
  }

 private:
  std::pair<double, double> st(const Eigen::VectorXd& x) const {
    if (gauge_.fix_scale) {
      const double r = std::sqrt(static_cast<double>(d_));
      return {r * std::cos(x(0)), r * std::sin(x(0))};
    }
    return {x(0), x(1)};
  }

  int n_;
  int d_;
  GaugeFix gauge_;
};

struct Outcome {
  bool done = false;
  double residual = std::numeric_limits<double>::infinity();
  int rank = 0;
  int iterations = 0;
  WVectors w;
};

constexpr int kStallWindow = 50;
constexpr double kStallFactor = 0.999;
constexpr double kGeoStep = 0.1;
constexpr double kGeoRatio = 0.75;
constexpr int kPolishSteps = 400;
constexpr double kPolishGain = 0.999;
constexpr double kSnap = 1e-4;

Outcome run_restart(const SearchProblem& p, const Parametrization& par, int index) {
  std::seed_seq seq{static_cast<std::uint32_t>(p.rng_seed), static_cast<std::uint32_t>(p.rng_seed >> 32),
                    static_cast<std::uint32_t>(index)};
  std::mt19937_64 rng(seq);
  Eigen::VectorXd x = par.initial(rng);

  WVectors w = par.unpack(x);
  Eigen::VectorXd r = residuals(w);
  double cost = r.squaredNorm();
  std::vector<int> frozen;
  auto jac = [&] {
    Eigen::MatrixXd j = par.reduce(jacobian(w), x);
    for (const int i : frozen) j.col(i).setZero();
    return j;
  };
  Eigen::MatrixXd J = jac();
  Eigen::MatrixXd A = J.transpose() * J;
  Eigen::VectorXd g = J.transpose() * r;
  double mu = 1e-3 * std::max(A.diagonal().maxCoeff(), 1.0);
  double checkpoint = std::sqrt(cost);

  // One damped step; returns false when it was rejected.
  auto step = [&] {
    Eigen::MatrixXd damped = A;
    damped.diagonal().array() += mu;
    const auto ldlt = damped.ldlt();
    Eigen::VectorXd delta = ldlt.solve(-g);
    {
      // Geodesic acceleration: second directional derivative of r along delta.
      const Eigen::VectorXd rh = residuals(par.unpack(x + kGeoStep * delta));
      const Eigen::VectorXd rvv = (2.0 / kGeoStep) * ((rh - r) / kGeoStep - J * delta);
      const Eigen::VectorXd acc = ldlt.solve(-(J.transpose() * rvv));
      if (2.0 * acc.norm() <= kGeoRatio * delta.norm()) delta += 0.5 * acc;
    }
    const Eigen::VectorXd xn = x + delta;
    const WVectors wn = par.unpack(xn);
    const Eigen::VectorXd rn = residuals(wn);
    const double cn = rn.squaredNorm();
    if (!(cn < cost)) {
      mu *= 10.0;
      return false;
    }
    x = xn;
    w = wn;
    r = rn;
    cost = cn;
    J = jac();
    A.noalias() = J.transpose() * J;
    g.noalias() = J.transpose() * r;
    mu = std::max(mu * 0.1, 1e-15);
    return true;
  };

  const double tol_sq = p.tol_feasible * p.tol_feasible;
  int it = 0;
  auto descend = [&] {
    for (int k = 0; k < p.max_iters && cost > tol_sq; ++k, ++it) {
      if (!step() && mu > 1e15) break;
      if ((k + 1) % kStallWindow == 0) {
        const double now = std::sqrt(cost);
        if (now > kStallFactor * checkpoint) break;
        checkpoint = now;
      }
    }
    if (cost > tol_sq) return;
    for (int k = 0; k < kPolishSteps && mu <= 1e15; ++k) {
      const double before = cost;
      if (step() && cost > kPolishGain * before) break;
    }
  };
  descend();

  if (cost <= tol_sq) {
    // Hits near a singular zero carry small noise; pin it to zero and polish again.
    const Eigen::VectorXd keep = x;
    const double keep_cost = cost;
    const double cut = kSnap * x.cwiseAbs().maxCoeff();
    Eigen::VectorXd xs = x;
    for (int i = 0; i < x.size(); ++i) {
      if (x(i) != 0.0 && std::abs(x(i)) <= cut) {
        xs(i) = 0.0;
        frozen.push_back(i);
      }
    }
    if (!frozen.empty()) {
      x = xs;
      w = par.unpack(x);
      r = residuals(w);
      cost = r.squaredNorm();
      J = jac();
      A.noalias() = J.transpose() * J;
      g.noalias() = J.transpose() * r;
      mu = 1e-3 * std::max(A.diagonal().maxCoeff(), 1.0);
      checkpoint = std::sqrt(cost);
      descend();
      if (!(cost <= tol_sq) ||
          fullness_rank(curve_from_w(p.n, p.d, w)) < fullness_rank(curve_from_w(p.n, p.d, par.unpack(keep)))) {
        x = keep;
        w = par.unpack(x);
        cost = keep_cost;
      }
    }
  }

  if (p.gauge.fix_a1_svd) {
    // Row sign flips are unitary frame changes; they make s, t >= 0.
    const int n = p.n;
    if (w[0](0).real() < 0.0) {
      for (auto& v : w) v.head(n) = -v.head(n);
    }
    if (w[0](n + 1).real() < 0.0) {
      for (auto& v : w) v.tail(n) = -v.tail(n);
    }
  }
  Outcome out;
  out.done = true;
  out.residual = std::sqrt(cost);
  out.iterations = it;
  out.rank = fullness_rank(curve_from_w(p.n, p.d, w));
  out.w = std::move(w);
  return out;
}

int histogram_bin(double residual) {
  if (!(residual > 0.0)) return -17;
  return std::clamp(static_cast<int>(std::floor(std::log10(residual))), -17, 6);
}

}  // namespace

SearchReport search(const SearchProblem& p) {
  if (p.n < 2) throw InputError("search: n must be >= 2");
  if (p.d < 1) throw InputError("search: d must be >= 1");
  if (p.restarts < 1) throw InputError("search: restarts must be >= 1");
  if (p.max_iters < 0) throw InputError("search: max_iters must be >= 0");
  if (!(p.tol_feasible > 0.0)) throw InputError("search: tol_feasible must be positive");

  const auto start = std::chrono::steady_clock::now();
  const Parametrization par(p.n, p.d, p.gauge);
  std::vector<Outcome> outcomes(p.restarts);
  std::atomic<int> next{0};
  std::atomic<int> hit{p.restarts};

  auto worker = [&] {
    for (;;) {
      const int idx = next.fetch_add(1);
      if (idx >= p.restarts || idx > hit.load()) return;
      outcomes[idx] = run_restart(p, par, idx);
      const Outcome& o = outcomes[idx];
      if (o.residual <= p.tol_feasible && o.rank == p.n) {
        int cur = hit.load();
        while (idx < cur && !hit.compare_exchange_weak(cur, idx)) {
        }
        return;
      }
    }
  };
  const int threads = std::min(solver_threads(p.threads), p.restarts);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  SearchReport rep;
  rep.n = p.n;
  rep.d = p.d;
  rep.seed = p.rng_seed;
  const int last = std::min(hit.load(), p.restarts - 1);
  rep.restarts_run = last + 1;
  rep.best_residual = std::numeric_limits<double>::infinity();
  rep.best_residual_any = std::numeric_limits<double>::infinity();
  int best_full = -1, best_any = -1;
  for (int i = 0; i <= last; ++i) {
    const Outcome& o = outcomes[i];
    if (!o.done) continue;
    ++rep.histogram[histogram_bin(o.residual)];
    if (o.residual < rep.best_residual_any) {
      rep.best_residual_any = o.residual;
      best_any = i;
    }
    if (o.rank == p.n && o.residual < rep.best_residual) {
      rep.best_residual = o.residual;
      best_full = i;
    }
  }
  if (hit.load() < p.restarts) {
    rep.feasible = true;
    rep.restarts_to_hit = hit.load() + 1;
    best_full = hit.load();
    rep.best_residual = outcomes[best_full].residual;
  }
  const int chosen = best_full >= 0 ? best_full : best_any;
  if (chosen >= 0) {
    rep.best_curve = curve_from_w(p.n, p.d, outcomes[chosen].w);
    rep.fullness_rank = outcomes[chosen].rank;
    rep.full = rep.fullness_rank == p.n;
  }
  rep.label = rep.feasible ? "solution found at restart " + std::to_string(*rep.restarts_to_hit)
                           : "no solution found under budget (search evidence, not proof)";
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::vector<SearchReport> feasibility_scan(int n, int d_min, int d_max, const SearchProblem& p) {
  if (d_min < 1 || d_max < d_min) throw InputError("feasibility_scan: need 1 <= d_min <= d_max");
  std::vector<SearchReport> out;
  for (int d = d_min; d <= d_max; ++d) {
    SearchProblem q = p;
    q.n = n;
    q.d = d;
    out.push_back(search(q));
  }
  return out;
}

}  // namespace grasscurve
