#include "grasscurve/exterior.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <string>
#include <tuple>

#include "grasscurve/errors.hpp"

namespace grasscurve {

std::int64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::size_t tuple_rank(std::span<const int> tuple, int n) {
  const int k = static_cast<int>(tuple.size());
  std::size_t rank = 0;
  int prev = 0;
  for (int i = 0; i < k; ++i) {
    const int t = tuple[i];
    if (t <= prev || t > n) {
      throw InputError("tuple_rank: tuple must be strictly increasing within 1.." +
                       std::to_string(n));
    }
    for (int v = prev + 1; v < t; ++v) rank += binomial(n - v, k - i - 1);
    prev = t;
  }
  return rank;
}

Tuple rank_tuple(std::size_t rank, int n, int k) {
  if (k < 0 || k > n || rank >= static_cast<std::size_t>(binomial(n, k))) {
    throw InputError("rank_tuple: rank out of range");
  }
  Tuple t;
  t.reserve(k);
  int v = 1;
  for (int i = 0; i < k; ++i) {
    for (;; ++v) {
      const auto block = static_cast<std::size_t>(binomial(n - v, k - i - 1));
      if (rank < block) break;
      rank -= block;
    }
    t.push_back(v++);
  }
  return t;
}

std::vector<Tuple> all_tuples(int n, int k) {
  std::vector<Tuple> out;
  if (k < 0 || k > n) return out;
  Tuple t(k);
  for (int i = 0; i < k; ++i) t[i] = i + 1;
  while (true) {
    out.push_back(t);
    int i = k - 1;
    while (i >= 0 && t[i] == n - k + i + 1) --i;
    if (i < 0) break;
    ++t[i];
    for (int j = i + 1; j < k; ++j) t[j] = t[j - 1] + 1;
  }
  return out;
}

namespace {

struct WedgeTerm {
  std::uint32_t left;
  std::uint32_t right;
  std::uint32_t out;
  double sign;
};

// Shuffle table for Lambda^j x Lambda^k -> Lambda^{j+k}, built once per
// (n, j, k) and shared between threads.
const std::vector<WedgeTerm>& wedge_table(int n, int j, int k) {
  static std::shared_mutex mutex;
  static std::map<std::tuple<int, int, int>, std::unique_ptr<std::vector<WedgeTerm>>> cache;
  const auto key = std::make_tuple(n, j, k);
  {
    std::shared_lock lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return *it->second;
  }
  auto table = std::make_unique<std::vector<WedgeTerm>>();
  const auto left = all_tuples(n, j);
  const auto right = all_tuples(n, k);
  Tuple merged(j + k);
  for (std::size_t a = 0; a < left.size(); ++a) {
    for (std::size_t b = 0; b < right.size(); ++b) {
      const Tuple& u = left[a];
      const Tuple& v = right[b];
      // Count inversions of the concatenation u|v; any repeated index kills the term.
      int inversions = 0;
      bool disjoint = true;
      for (int x : v) {
        for (int y : u) {
          if (y == x) disjoint = false;
          if (y > x) ++inversions;
        }
      }
      if (!disjoint) continue;
      std::merge(u.begin(), u.end(), v.begin(), v.end(), merged.begin());
      table->push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
                        static_cast<std::uint32_t>(tuple_rank(merged, n)),
                        (inversions % 2 == 0) ? 1.0 : -1.0});
    }
  }
  std::unique_lock lock(mutex);
  auto [it, inserted] = cache.emplace(key, std::move(table));
  return *it->second;
}

}  // namespace

MultiVec::MultiVec(int n, int k) : n_(n), k_(k) {
  if (n < 1) throw InputError("MultiVec: ambient dimension must be positive");
  if (k < 0 || k > kMaxGrade) throw InputError("MultiVec: grade must lie in 0..4");
  coeffs_.assign(static_cast<std::size_t>(binomial(n, k)), cplx{});
}

MultiVec::MultiVec(int n, int k, std::vector<cplx> coeffs) : MultiVec(n, k) {
  if (coeffs.size() != coeffs_.size()) {
    throw InputError("MultiVec: expected " + std::to_string(coeffs_.size()) +
                     " coefficients, got " + std::to_string(coeffs.size()));
  }
  coeffs_ = std::move(coeffs);
}

MultiVec MultiVec::from_vector(std::span<const cplx> components) {
  return MultiVec(static_cast<int>(components.size()), 1,
                  std::vector<cplx>(components.begin(), components.end()));
}

MultiVec MultiVec::basis(int n, std::span<const int> tuple) {
  MultiVec out(n, static_cast<int>(tuple.size()));
  out.coeffs_[tuple_rank(tuple, n)] = 1.0;
  return out;
}

cplx MultiVec::at(std::span<const int> tuple) const {
  if (static_cast<int>(tuple.size()) != k_) throw InputError("MultiVec::at: wrong tuple length");
  return coeffs_[tuple_rank(tuple, n_)];
}

double MultiVec::norm_sq() const {
  double s = 0.0;
  for (const auto& c : coeffs_) s += std::norm(c);
  return s;
}

double MultiVec::norm() const { return std::sqrt(norm_sq()); }

double MultiVec::max_abs() const {
  double m = 0.0;
  for (const auto& c : coeffs_) m = std::max(m, std::abs(c));
  return m;
}

bool MultiVec::is_zero() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](cplx c) { return c == cplx{}; });
}

void MultiVec::check_same_shape(const MultiVec& other) const {
  if (n_ != other.n_ || k_ != other.k_) {
    throw InputError("MultiVec: shape mismatch (n=" + std::to_string(n_) + ",k=" +
                     std::to_string(k_) + " vs n=" + std::to_string(other.n_) +
                     ",k=" + std::to_string(other.k_) + ")");
  }
}

MultiVec& MultiVec::operator+=(const MultiVec& other) {
  check_same_shape(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

MultiVec& MultiVec::operator-=(const MultiVec& other) {
  check_same_shape(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

MultiVec& MultiVec::operator*=(cplx s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

void wedge_accumulate(const MultiVec& u, const MultiVec& v, cplx s, MultiVec& out) {
  if (u.dim() != v.dim()) throw InputError("wedge: dimension mismatch");
  const int grade = u.grade() + v.grade();
  if (grade > kMaxGrade) throw InputError("wedge: resulting grade exceeds 4");
  if (out.dim() != u.dim() || out.grade() != grade) throw InputError("wedge: output shape mismatch");
  const auto uc = u.coeffs();
  const auto vc = v.coeffs();
  auto oc = out.coeffs();
  for (const auto& t : wedge_table(u.dim(), u.grade(), v.grade())) {
    oc[t.out] += s * (t.sign * (uc[t.left] * vc[t.right]));
  }
}

MultiVec wedge(const MultiVec& u, const MultiVec& v) {
  if (u.dim() != v.dim()) throw InputError("wedge: dimension mismatch");
  if (u.grade() + v.grade() > kMaxGrade) throw InputError("wedge: resulting grade exceeds 4");
  MultiVec out(u.dim(), u.grade() + v.grade());
  wedge_accumulate(u, v, 1.0, out);
  return out;
}

cplx herm_inner(const MultiVec& u, const MultiVec& v) {
  if (u.dim() != v.dim() || u.grade() != v.grade()) throw InputError("herm_inner: shape mismatch");
  cplx s{};
  const auto uc = u.coeffs();
  const auto vc = v.coeffs();
  for (std::size_t i = 0; i < uc.size(); ++i) s += uc[i] * std::conj(vc[i]);
  return s;
}

}  // namespace grasscurve
