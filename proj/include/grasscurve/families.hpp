#pragma once

// Explicit constant-curvature curves.

#include <vector>

#include "grasscurve/curve.hpp"

namespace grasscurve {

/// Coefficients sqrt(C(d,k)), k = 0..d, of the Veronese curve of degree d.
std::vector<double> veronese(int d);

/// The Veronese curve of degree n in the first row, zero second row:
/// F_1 = (sqrt(C(n,1)) z, ..., sqrt(C(n,n)) z^n), F_2 = 0, d = n.
Curve family_dn(int n);

/// Direct sum of the Veronese curve of degree n+1 with its first derived
/// curve, d = 2n. For k = 2..n+1, column k-2 carries
///   F_1 = (k-1) sqrt(C(n+1,k)) z^k,   F_2 = sqrt(k C(n,k-1)) z^{k-1},
/// so the first column of F_2 is sqrt(2n) z.
Curve family_d2n(int n);

}  // namespace grasscurve
