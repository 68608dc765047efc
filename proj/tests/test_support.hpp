#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>
#include <utility>

#include "grasscurve/curve.hpp"
#include "grasscurve/gauge.hpp"
#include "grasscurve/solver.hpp"

namespace support {

using grasscurve::cplx;
using grasscurve::Curve;

inline cplx gauss(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

inline Curve random_curve(int n, int d, int deg_max, std::mt19937_64& rng) {
  std::vector<grasscurve::CoeffBlock> blocks;
  for (int a = 0; a < deg_max; ++a) {
    grasscurve::CoeffBlock b(2, n);
    for (int r = 0; r < 2; ++r) {
      for (int k = 0; k < n; ++k) b(r, k) = gauss(rng);
    }
    blocks.push_back(b);
  }
  return Curve(n, d, std::move(blocks));
}

inline Eigen::MatrixXcd random_unitary(int n, std::mt19937_64& rng) {
  Eigen::MatrixXcd g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = gauss(rng);
  }
  const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
}

inline grasscurve::Mobius random_rotation(std::mt19937_64& rng) {
  return grasscurve::Mobius::su2(gauss(rng), gauss(rng));
}

inline cplx random_point(std::mt19937_64& rng, double radius = 1.5) {
  std::uniform_real_distribution<double> u(-radius, radius);
  const double x = u(rng);
  const double y = u(rng);
  return {x, y};
}

/// Solver output for (n, d) at seed 42 with 200 restarts, computed once.
inline const Curve& found_curve(int n, int d) {
  static std::map<std::pair<int, int>, Curve> cache;
  auto it = cache.find({n, d});
  if (it == cache.end()) {
    grasscurve::SearchProblem p;
    p.n = n;
    p.d = d;
    p.restarts = 200;
    p.rng_seed = 42;
    const auto rep = grasscurve::search(p);
    if (!rep.feasible) throw std::runtime_error("no curve found for the requested (n, d)");
    it = cache.emplace(std::make_pair(n, d), *rep.best_curve).first;
  }
  return it->second;
}

inline double rel_err(double got, double want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

}  // namespace support
