#pragma once

// Exterior algebra of C^n in grades 1..4.
//
// A grade-k element is stored densely over the basis e_{i1}^...^e_{ik},
// i1 < ... < ik, in lexicographic order of the index tuple. Tuples are
// 1-based throughout to match the usual e_1..e_n labelling.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace grasscurve {

using cplx = std::complex<double>;

inline constexpr int kMaxGrade = 4;

/// C(n,k); zero outside 0 <= k <= n.
std::int64_t binomial(int n, int k);

using Tuple = std::vector<int>;

/// Lexicographic rank of a strictly increasing 1-based tuple among all
/// k-subsets of {1..n}. Throws InputError for non-increasing or out of range.
std::size_t tuple_rank(std::span<const int> tuple, int n);

/// Inverse of tuple_rank.
Tuple rank_tuple(std::size_t rank, int n, int k);

/// All k-tuples of {1..n} in rank order.
std::vector<Tuple> all_tuples(int n, int k);

class MultiVec {
 public:
  /// Zero element of Lambda^k C^n.
  MultiVec(int n, int k);
  MultiVec(int n, int k, std::vector<cplx> coeffs);

  /// Grade-1 element with the given components.
  static MultiVec from_vector(std::span<const cplx> components);
  /// Single basis element e_{t1}^...^e_{tk}.
  static MultiVec basis(int n, std::span<const int> tuple);

  int dim() const { return n_; }
  int grade() const { return k_; }
  std::size_t size() const { return coeffs_.size(); }

  std::span<const cplx> coeffs() const { return coeffs_; }
  std::span<cplx> coeffs() { return coeffs_; }
  cplx operator[](std::size_t i) const { return coeffs_[i]; }
  cplx& operator[](std::size_t i) { return coeffs_[i]; }
  cplx at(std::span<const int> tuple) const;

  double norm_sq() const;
  double norm() const;
  double max_abs() const;
  bool is_zero() const;

  MultiVec& operator+=(const MultiVec& other);
  MultiVec& operator-=(const MultiVec& other);
  MultiVec& operator*=(cplx s);

  friend MultiVec operator+(MultiVec a, const MultiVec& b) { return a += b; }
  friend MultiVec operator-(MultiVec a, const MultiVec& b) { return a -= b; }
  friend MultiVec operator*(cplx s, MultiVec a) { return a *= s; }
  friend MultiVec operator*(MultiVec a, cplx s) { return a *= s; }
  friend bool operator==(const MultiVec&, const MultiVec&) = default;

 private:
  void check_same_shape(const MultiVec& other) const;

  int n_;
  int k_;
  std::vector<cplx> coeffs_;
};

/// u ^ v. Requires equal ambient dimension and grade(u)+grade(v) <= 4.
MultiVec wedge(const MultiVec& u, const MultiVec& v);

/// Accumulates s * (u ^ v) into out without allocating.
void wedge_accumulate(const MultiVec& u, const MultiVec& v, cplx s, MultiVec& out);

/// <u,v> = sum_I u_I conj(v_I); conjugate-linear in the second slot.
cplx herm_inner(const MultiVec& u, const MultiVec& v);

}  // namespace grasscurve
