#pragma once

#include <functional>

#include "qtrace/report.hpp"
#include "qtrace/series.hpp"

namespace qtrace {

/// Exact q-expansion of G~_{2k+2}(q) truncated after q^N. k = 0 gives G~_2.
struct Eisenstein {
    int k = 0;
    int weight = 2;
    MultiSeries expansion{{"q"}};
};

Eisenstein eisenstein(int k, int N);

/// P_{m+1}(x; q) in the variables (x, q); x is Laurent.
struct Kernel {
    int m = 0;
    MultiSeries expansion{{"x", "q"}};
};

/// Positive x-powers x^l are kept for l <= x_range; every negative power that
/// meets q-order <= q_order is present.
Kernel kernel_P(int m, int x_range, int q_order);

/// P_{m+1}(q_z; q) re-expanded in z around 0 up to z^{z_order}, q up to q^{q_order}.
///
/// The q^0 row sum_l l^m q_z^l does not converge termwise at z = 0; it is
/// expanded through its closed Laurent form
///   sum_{l>=1} l^m e^{l t} = m! (-t)^{-m-1} + sum_j zeta(-m-j) t^j / j!,  t = 2 pi i z.
/// Rows q^n with n >= 1 are finite sums of q_z^{+-l}, re-expanded as exponentials.
MultiSeries kernel_P_at_qz(int m, int z_order, int q_order);

/// Laurent expansion of the Weierstrass-family function in (z, q).
struct WpSeries {
    int m = 1;
    int weight = 1;
    MultiSeries expansion{{"z", "q"}};
};

/// Returns the q-expansion of G~_{2k+2}; lets callers substitute perturbed inputs.
using EisensteinSource = std::function<MultiSeries(int k, int q_order)>;

WpSeries wp_series(int m, int z_order, int q_order);
WpSeries wp_series(int m, int z_order, int q_order, const EisensteinSource& source);

/// wp_{m+1} == -(1/m) d/dz wp_m coefficient-wise on the common truncation.
CheckReport wp_recursion_check(int m, int z_order, int q_order);
CheckReport wp_recursion_check(const WpSeries& wp_m, const WpSeries& wp_next);

/// wp_m(z;q) == (-1)^m (P_m(q_z;q) - d^{m-1}/dz^{m-1} (G~_2(q) z - pi i)).
CheckReport wp_P_relation_check(int m, int z_order, int q_order);
CheckReport wp_P_relation_check(int m, int z_order, int q_order, const MultiSeries& g2);

struct ModularSeries {
    MultiSeries expansion{{"q"}};
    int weight = 0;
};

/// (2 pi i)^2 q d/dq f + k G~_2 f, carrying weight k + 2.
ModularSeries serre_derivative(const MultiSeries& f, int k);

/// Embeds a series in q into the variables `vars` (which must contain "q").
MultiSeries lift_q_series(const MultiSeries& f, const std::vector<std::string>& vars);

}  // namespace qtrace
