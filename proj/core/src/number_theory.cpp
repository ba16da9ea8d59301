#include "qtrace/number_theory.hpp"

#include <vector>

namespace qtrace {

Rational bernoulli(unsigned n)
{
    // sum_{k=0}^{m} C(m+1, k) B_k = 0 for m >= 1
    std::vector<Rational> b(n + 1);
    b[0] = 1;
    for (unsigned m = 1; m <= n; ++m) {
        Rational acc = 0;
        for (unsigned k = 0; k < m; ++k) {
            acc += Rational(binomial(m + 1, k)) * b[k];
        }
        b[m] = -acc / Rational(m + 1);
    }
    return b[n];
}

Scalar zeta_even(unsigned k)
{
    if (k == 0) {
        return Scalar(Rational(-1, 2));
    }
    Rational c = bernoulli(2 * k) * Rational(Integer(1) << (2 * k)) / Rational(2 * factorial(2 * k));
    if (k % 2 == 0) {
        c = -c;
    }
    return Scalar::pi_power(static_cast<int>(2 * k), {c, 0});
}

Rational zeta_nonpositive(unsigned s)
{
    Rational v = bernoulli(s + 1) / Rational(s + 1);
    return s % 2 == 0 ? v : Rational(-v);
}

Integer stirling2(unsigned n, unsigned k)
{
    if (n == 0 && k == 0) {
        return 1;
    }
    if (n == 0 || k == 0 || k > n) {
        return 0;
    }
    std::vector<Integer> row(k + 1);
    row[0] = 1;
    for (unsigned i = 1; i <= n; ++i) {
        for (unsigned j = std::min(i, k); j >= 1; --j) {
            row[j] = Integer(j) * row[j] + row[j - 1];
        }
        row[0] = 0;
    }
    return row[k];
}

}  // namespace qtrace
