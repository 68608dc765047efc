#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <vector>

#include "grasscurve/exterior.hpp"

namespace grasscurve {

/// Vector-valued polynomial in one complex variable: coefficient blocks of a
/// fixed length L, indexed by power of z.
class PolyVec {
 public:
  explicit PolyVec(std::size_t length) : length_(length) {}
  PolyVec(std::size_t length, std::vector<std::vector<cplx>> blocks);

  std::size_t length() const { return length_; }
  /// Number of stored blocks (powers 0..num_blocks()-1).
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  const std::vector<cplx>& block(int power) const { return blocks_.at(power); }
  std::vector<cplx>& block(int power) { return blocks_.at(power); }

  /// Highest power whose block has an entry above tol; -1 if none.
  int degree(double tol = 0.0) const;
  /// Drops trailing blocks whose entries are all <= tol.
  void trim(double tol = 0.0);

  /// Coefficient list (by power) of component i.
  std::vector<cplx> component(std::size_t i) const;
  Eigen::VectorXcd evaluate(cplx z) const;
  double max_abs() const;

  /// Appends a block at the next power.
  void push_back(std::vector<cplx> block);

 private:
  std::size_t length_;
  std::vector<std::vector<cplx>> blocks_;
};

}  // namespace grasscurve
