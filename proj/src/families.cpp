#include "grasscurve/families.hpp"

#include <cmath>

#include "grasscurve/errors.hpp"

namespace grasscurve {

std::vector<double> veronese(int d) {
  if (d < 1) throw InputError("veronese: d must be >= 1");
  std::vector<double> out(d + 1);
  for (int k = 0; k <= d; ++k) out[k] = std::sqrt(static_cast<double>(binomial(d, k)));
  return out;
}

Curve family_dn(int n) {
  if (n < 2) throw InputError("family_dn: n must be >= 2");
  std::vector<CoeffBlock> blocks(n, CoeffBlock::Zero(2, n));
  const auto v = veronese(n);
  for (int alpha = 1; alpha <= n; ++alpha) blocks[alpha - 1](0, alpha - 1) = v[alpha];
  return Curve(n, n, std::move(blocks));
}

Curve family_d2n(int n) {
  if (n < 2) throw InputError("family_d2n: n must be >= 2");
  std::vector<CoeffBlock> blocks(n + 1, CoeffBlock::Zero(2, n));
  for (int k = 2; k <= n + 1; ++k) {
    const int col = k - 2;
    blocks[k - 1](0, col) = (k - 1) * std::sqrt(static_cast<double>(binomial(n + 1, k)));
    blocks[k - 2](1, col) = std::sqrt(static_cast<double>(k * binomial(n, k - 1)));
  }
  return Curve(n, 2 * n, std::move(blocks));
}

}  // namespace grasscurve
