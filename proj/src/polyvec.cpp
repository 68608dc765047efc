#include "grasscurve/polyvec.hpp"

#include <algorithm>
#include <cmath>

#include "grasscurve/errors.hpp"

namespace grasscurve {

PolyVec::PolyVec(std::size_t length, std::vector<std::vector<cplx>> blocks)
    : length_(length), blocks_(std::move(blocks)) {
  for (const auto& b : blocks_) {
    if (b.size() != length_) throw InputError("PolyVec: block length mismatch");
  }
}

int PolyVec::degree(double tol) const {
  for (int k = num_blocks() - 1; k >= 0; --k) {
    for (const auto& c : blocks_[k]) {
      if (std::abs(c) > tol) return k;
    }
  }
  return -1;
}

void PolyVec::trim(double tol) { blocks_.resize(static_cast<std::size_t>(degree(tol) + 1)); }

std::vector<cplx> PolyVec::component(std::size_t i) const {
  if (i >= length_) throw InputError("PolyVec::component: index out of range");
  std::vector<cplx> out(blocks_.size());
  for (std::size_t k = 0; k < blocks_.size(); ++k) out[k] = blocks_[k][i];
  return out;
}

Eigen::VectorXcd PolyVec::evaluate(cplx z) const {
  Eigen::VectorXcd acc = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(length_));
  for (int k = num_blocks() - 1; k >= 0; --k) {
    acc *= z;
    for (std::size_t i = 0; i < length_; ++i) acc(static_cast<Eigen::Index>(i)) += blocks_[k][i];
  }
  return acc;
}

double PolyVec::max_abs() const {
  double m = 0.0;
  for (const auto& b : blocks_) {
    for (const auto& c : b) m = std::max(m, std::abs(c));
  }
  return m;
}

void PolyVec::push_back(std::vector<cplx> block) {
  if (block.size() != length_) throw InputError("PolyVec::push_back: block length mismatch");
  blocks_.push_back(std::move(block));
}

}  // namespace grasscurve
