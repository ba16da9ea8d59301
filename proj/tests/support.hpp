#pragma once

// Independent oracles and hand-rolled random generators shared by the test
// binaries. Nothing here calls the code under test except to build inputs.

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "qtrace/log_series.hpp"
#include "qtrace/rational.hpp"
#include "qtrace/scalar.hpp"

namespace qtrace::test {

/// sigma_p(n) by trial division.
inline Integer divisor_power_sum(long n, unsigned p)
{
    Integer s = 0;
    for (long d = 1; d <= n; ++d) {
        if (n % d == 0) {
            Integer t;
            mpz_ui_pow_ui(t.get_mpz_t(), static_cast<unsigned long>(d), p);
            s += t;
        }
    }
    return s;
}

inline Integer fact(unsigned n)
{
    Integer f = 1;
    for (unsigned i = 2; i <= n; ++i) {
        f *= i;
    }
    return f;
}

/// 2 (2 pi i)^{2k+2} / (2k+1)!  =  (-1)^{k+1} 2^{2k+3} pi^{2k+2} / (2k+1)!, written out by hand.
inline Scalar eisenstein_prefactor(int k)
{
    Integer two_pow;
    mpz_ui_pow_ui(two_pow.get_mpz_t(), 2, static_cast<unsigned long>(2 * k + 3));
    Rational c(two_pow, fact(static_cast<unsigned>(2 * k + 1)));
    c.canonicalize();
    if ((k + 1) % 2 == 1) {
        c = -c;
    }
    return Scalar::pi_power(2 * k + 2, {c, 0});
}

/// Plain double-loop Eisenstein value: 2 zeta(2k+2) + prefactor sum_{n,d | n} d^{2k+1} q^n.
inline std::complex<double> eisenstein_direct(int k, std::complex<double> tau, int terms = 60)
{
    const double pi = std::acos(-1.0);
    const std::complex<double> q = std::exp(std::complex<double>(0, 2 * pi) * tau);
    // zeta(s) by a partial sum plus the Euler-Maclaurin tail
    const double s = 2.0 * k + 2;
    const double cut = 1000.0;
    double zeta = 0.0;
    for (int n = 1; n < 1000; ++n) {
        zeta += std::pow(static_cast<double>(n), -s);
    }
    zeta += std::pow(cut, 1 - s) / (s - 1) + 0.5 * std::pow(cut, -s) + s * std::pow(cut, -s - 1) / 12;
    std::complex<double> sum = 0.0;
    std::complex<double> qn = 1.0;
    for (int n = 1; n <= terms; ++n) {
        qn *= q;
        double sigma = 0.0;
        for (int d = 1; d <= n; ++d) {
            if (n % d == 0) {
                sigma += std::pow(static_cast<double>(d), 2.0 * k + 1);
            }
        }
        sum += sigma * qn;
    }
    const std::complex<double> two_pi_i(0, 2 * pi);
    double f = 1.0;
    for (int i = 2; i <= 2 * k + 1; ++i) {
        f *= i;
    }
    return 2.0 * zeta + 2.0 * std::pow(two_pi_i, 2 * k + 2) / f * sum;
}

/// Brute-force lattice sum z^{-2} + sum' [(z - w)^{-2} - w^{-2}] over w = k + l tau,
/// |k|, |l| <= R, with the box-truncation error a R^{-2} + b R^{-3} removed by
/// solving from the sums at R, 3R/2 and 2R.
inline std::complex<double> lattice_wp2_oracle(std::complex<double> z, std::complex<double> tau, int R = 60)
{
    auto raw = [&](int r) {
        std::complex<double> s = 1.0 / (z * z);
        for (int k = -r; k <= r; ++k) {
            for (int l = -r; l <= r; ++l) {
                if (k == 0 && l == 0) {
                    continue;
                }
                const std::complex<double> w = static_cast<double>(k) + static_cast<double>(l) * tau;
                s += 1.0 / ((z - w) * (z - w)) - 1.0 / (w * w);
            }
        }
        return s;
    };
    const double r1 = R / 2.0;
    const double r2 = 3.0 * R / 4.0;
    const double r3 = R;
    const auto f1 = raw(R / 2);
    const auto f2 = raw(3 * R / 4);
    const auto f3 = raw(R);
    // f(R) = F + a R^{-2} + b R^{-3}; eliminate a and b (Lagrange in the basis 1, R^{-2}, R^{-3}).
    const double u[3] = {1 / (r1 * r1), 1 / (r2 * r2), 1 / (r3 * r3)};
    const double v[3] = {1 / (r1 * r1 * r1), 1 / (r2 * r2 * r2), 1 / (r3 * r3 * r3)};
    const double det = (u[1] * v[2] - u[2] * v[1]) - (u[0] * v[2] - u[2] * v[0]) + (u[0] * v[1] - u[1] * v[0]);
    const double c1 = (u[1] * v[2] - u[2] * v[1]) / det;
    const double c2 = -(u[0] * v[2] - u[2] * v[0]) / det;
    const double c3 = (u[0] * v[1] - u[1] * v[0]) / det;
    return c1 * f1 + c2 * f2 + c3 * f3;
}

/// The same lattice sum with the k-sum done in closed form,
/// sum_k (x + k)^{-2} = pi^2 / sin^2(pi x), leaving an exponentially convergent l-sum.
inline std::complex<double> row_summed_wp2(std::complex<double> z, std::complex<double> tau, int L = 60)
{
    const double pi = std::acos(-1.0);
    auto csc2 = [&](std::complex<double> x) {
        const std::complex<double> s = std::sin(pi * x);
        return pi * pi / (s * s);
    };
    std::complex<double> out = csc2(z) - pi * pi / 3.0;
    for (int l = 1; l <= L; ++l) {
        const std::complex<double> w = static_cast<double>(l) * tau;
        out += csc2(z + w) + csc2(z - w) - 2.0 * csc2(w);
    }
    return out;
}

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

    bool coin() { return integer(0, 1) == 1; }

    /// Small-height rational p/q, |p| <= 9, 1 <= q <= 6.
    Rational rational()
    {
        Rational r(integer(-9, 9), integer(1, 6));
        r.canonicalize();
        return r;
    }

    Rational nonzero_rational()
    {
        Rational r;
        do {
            r = rational();
        } while (r == 0);
        return r;
    }

    /// Exact scalar with up to three pi powers and Gaussian-rational coefficients.
    Scalar scalar()
    {
        Scalar s;
        const int parts = integer(1, 3);
        for (int i = 0; i < parts; ++i) {
            s += Scalar::pi_power(integer(0, 4), {rational(), coin() ? rational() : Rational(0)});
        }
        return s;
    }

    /// Series in x with exponents in (1/den) Z, logs up to max_log, truncated at `trunc`.
    LogSeries log_series(int den, int lo, int hi, int max_log, const Rational& trunc, bool rational_coefs = true)
    {
        LogSeries f;
        f.set_max_logpower(8);
        const int count = integer(0, 6);
        for (int t = 0; t < count; ++t) {
            Rational e(integer(lo * den, hi * den), den);
            e.canonicalize();
            if (e >= trunc) {
                continue;
            }
            const Scalar c = rational_coefs ? Scalar(nonzero_rational()) : scalar();
            f.add_term(e, integer(0, max_log), c);
        }
        f.truncate(trunc);
        return f;
    }

    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

inline double rel_diff(std::complex<double> a, std::complex<double> b)
{
    return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

}  // namespace qtrace::test
