#pragma once

#include "qtrace/rational.hpp"
#include "qtrace/scalar.hpp"

namespace qtrace {

/// Bernoulli number B_n with B_1 = -1/2.
Rational bernoulli(unsigned n);

/// zeta(2k) = (-1)^{k+1} B_{2k} (2 pi)^{2k} / (2 (2k)!) as an exact scalar, k >= 1.
Scalar zeta_even(unsigned k);

/// zeta(-s) = (-1)^s B_{s+1} / (s+1) for s >= 0.
Rational zeta_nonpositive(unsigned s);

/// Stirling number of the second kind S(n, k).
Integer stirling2(unsigned n, unsigned k);

}  // namespace qtrace
