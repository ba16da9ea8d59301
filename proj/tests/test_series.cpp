#include <doctest.h>

#include "qtrace/log_series.hpp"
#include "qtrace/number_theory.hpp"
#include "qtrace/series_json.hpp"
#include "support.hpp"

using namespace qtrace;
using qtrace::test::Gen;

namespace {

LogSeries x_pow(const Rational& e, int l = 0, const Scalar& c = Scalar(1))
{
    return LogSeries::monomial(e, l, c);
}

Rational q(long p, long d = 1)
{
    Rational r(p, d);
    r.canonicalize();
    return r;
}

/// Series in (x, y) from a list of (x-exp, log, y-exp, coefficient).
struct XYTerm {
    Rational ex;
    int log;
    int ey;
    Rational c;
};

MultiSeries xy(const std::vector<XYTerm>& terms)
{
    MultiSeries s({"x", "y"});
    for (const auto& t : terms) {
        s.add_term(Monomial({t.ex, Rational(t.ey)}, {t.log, 0}), Scalar(t.c));
    }
    return s;
}

/// Terms of s whose y-exponent is at most `max_y` and whose combined
/// y/w-degree (when a third variable exists) is at most `max_y`.
MultiSeries low_degree(const MultiSeries& s, int max_y)
{
    MultiSeries out = s.empty_like();
    for (const auto& [m, c] : s.terms()) {
        Rational deg = 0;
        for (std::size_t v = 1; v < m.size(); ++v) {
            deg += m.exps[v];
        }
        if (deg <= max_y) {
            out.add_term(m, c);
        }
    }
    return out;
}

}  // namespace

TEST_SUITE("scalar")
{
    TEST_CASE("pi arithmetic")
    {
        const Scalar two_pi_i = Scalar::two_pi_i_pow(1);
        CHECK(two_pi_i * two_pi_i == Scalar::pi_power(2, {-4, 0}));
        CHECK(Scalar::two_pi_i_pow(4) == Scalar::pi_power(4, {16, 0}));
        CHECK(Scalar::pi_i() * Scalar::pi_i() == Scalar::pi_power(2, {-1, 0}));
        CHECK((Scalar(q(1, 2)) + Scalar(q(1, 2))) == Scalar(1));
        CHECK((Scalar::pi_power(3, {1, 0}) - Scalar::pi_power(3, {1, 0})).is_zero());
    }

    TEST_CASE("exact and numeric scalars do not mix")
    {
        CHECK_THROWS_AS(Scalar(1) + Scalar(Complex(1.0, 0.0)), ScalarKindMismatch);
        CHECK_THROWS_AS(Scalar(1) * Scalar(Complex(1.0, 0.0)), ScalarKindMismatch);
    }

    TEST_CASE("zeta values from Bernoulli numbers")
    {
        CHECK(zeta_even(1) == Scalar::pi_power(2, {q(1, 6), 0}));
        CHECK(zeta_even(2) == Scalar::pi_power(4, {q(1, 90), 0}));
        CHECK(zeta_even(3) == Scalar::pi_power(6, {q(1, 945), 0}));
        CHECK(zeta_nonpositive(0) == q(-1, 2));
        CHECK(zeta_nonpositive(1) == q(-1, 12));
        CHECK(zeta_nonpositive(2) == 0);
        CHECK(zeta_nonpositive(3) == q(1, 120));
    }

    TEST_CASE("property: exact ring laws and the numeric embedding")
    {
        Gen g(101);
        for (int trial = 0; trial < 200; ++trial) {
            const Scalar a = g.scalar();
            const Scalar b = g.scalar();
            const Scalar c = g.scalar();
            REQUIRE(a + b == b + a);
            REQUIRE(a * b == b * a);
            REQUIRE((a * b) * c == a * (b * c));
            REQUIRE(a * (b + c) == a * b + a * c);
            const Complex lhs = (a * b + c).value();
            const Complex rhs = a.value() * b.value() + c.value();
            REQUIRE(test::rel_diff(lhs, rhs) < 1e-12);
        }
    }
}

TEST_SUITE("log series")
{
    TEST_CASE("add")
    {
        CHECK((x_pow(1) + x_pow(2)) + (-x_pow(1)) == x_pow(2));
        const LogSeries f = x_pow(q(3, 2), 1, Scalar(q(2, 3)));
        CHECK(f + LogSeries() == f);
        const LogSeries sum = x_pow(0, 1) + x_pow(1, 1);
        CHECK(sum.coefficient(0, 1) == Scalar(1));
        CHECK(sum.coefficient(1, 1) == Scalar(1));
        CHECK(sum.series().size() == 2);
    }

    TEST_CASE("add takes the smaller truncation")
    {
        LogSeries a = x_pow(1);
        a.truncate(5);
        LogSeries b = x_pow(2);
        b.truncate(3);
        const LogSeries s = a + b;
        REQUIRE(s.trunc());
        CHECK(*s.trunc() == 3);
    }

    TEST_CASE("mul")
    {
        CHECK(x_pow(q(1, 2)) * x_pow(q(1, 2)) == x_pow(1));
        LogSeries geometric;
        for (int n = 0; n < 6; ++n) {
            geometric.add_term(n, 0, Scalar(n % 2 == 0 ? 1 : -1));
        }
        geometric.truncate(6);
        CHECK((x_pow(0) + x_pow(1)) * geometric == x_pow(0));
        CHECK(x_pow(0, 1) * x_pow(0, 1) == x_pow(0, 2));
    }

    TEST_CASE("log power overflow is reported")
    {
        LogSeries a = x_pow(0, 1);
        a.set_max_logpower(1);
        CHECK_THROWS_AS(a * a, LogPowerOverflow);
    }

    TEST_CASE("mixed scalar kinds are rejected")
    {
        const LogSeries exact = x_pow(1);
        const LogSeries numeric(exact.series().to_numeric());
        CHECK_THROWS(exact + numeric);
    }

    TEST_CASE("canonical form drops zeros")
    {
        LogSeries f;
        f.add_term(1, 0, Scalar(3));
        f.add_term(1, 0, Scalar(-3));
        CHECK(f.is_zero());
        CHECK(f == LogSeries());
    }

    TEST_CASE("formal d/dx")
    {
        for (int n = -3; n <= 5; ++n) {
            CHECK(formal_ddx(x_pow(n)) == (n == 0 ? LogSeries() : x_pow(n - 1, 0, Scalar(n))));
        }
        CHECK(formal_ddx(x_pow(0, 1)) == x_pow(-1));
        // x^2 log x -> 2 x log x + x, written out by hand
        CHECK(formal_ddx(x_pow(2, 1)) == x_pow(1, 1, Scalar(2)) + x_pow(1));
        LogSeries t = x_pow(1);
        t.truncate(7);
        REQUIRE(formal_ddx(t).trunc());
        CHECK(*formal_ddx(t).trunc() == 6);
    }

    TEST_CASE("taylor shift")
    {
        CHECK(taylor_shift(x_pow(2), 2) == xy({{2, 0, 0, 1}, {1, 0, 1, 2}, {0, 0, 2, 1}}));
        // log(x + y) = log x + y/x - y^2/(2 x^2) + ...
        CHECK(taylor_shift(x_pow(0, 1), 2) == xy({{0, 1, 0, 1}, {-1, 0, 1, 1}, {-2, 0, 2, q(-1, 2)}}));
        CHECK(taylor_shift(x_pow(q(1, 2)), 1) == xy({{q(1, 2), 0, 0, 1}, {q(-1, 2), 0, 1, q(1, 2)}}));
    }

    TEST_CASE("scale exponential")
    {
        const Rational n = q(5, 3);
        CHECK(scale_exponential(x_pow(n), 2) == xy({{n, 0, 0, 1}, {n, 0, 1, n}, {n, 0, 2, n * n / 2}}));
        CHECK(scale_exponential(x_pow(0, 1), 3) == xy({{0, 1, 0, 1}, {0, 0, 1, 1}}));
        CHECK(scale_exponential(x_pow(0), 4) == xy({{0, 0, 0, 1}}));
    }

    TEST_CASE("exp and log(1 - t)")
    {
        LogSeries x = x_pow(1);
        x.truncate(8);
        LogSeries one_minus_x = x_pow(0) - x;
        CHECK(exp_series(log1m_series(x)) == one_minus_x);
        const LogSeries l = log1m_series(x);
        for (int n = 1; n < 8; ++n) {
            CHECK(l.coefficient(n) == Scalar(q(-1, n)));
        }
        CHECK(exp_series(x).coefficient(3) == Scalar(q(1, 6)));
    }

    TEST_CASE("exp rejects a nonpositive minimal exponent")
    {
        LogSeries t = x_pow(0) + x_pow(1);
        t.truncate(4);
        CHECK_THROWS_AS(exp_series(t), SeriesError);
        CHECK_THROWS_AS(log1m_series(t), SeriesError);
        CHECK_THROWS_AS(exp_series(x_pow(1)), SeriesError);  // no truncation order
    }

    TEST_CASE("json round trip")
    {
        LogSeries f = x_pow(q(3, 2), 1, Scalar(q(1, 3))) + x_pow(-1, 0, Scalar::two_pi_i_pow(3));
        f.truncate(5);
        const nlohmann::json j = series_to_json(f);
        CHECK(j.at("var") == "x");
        CHECK(j.at("trunc") == "5");
        CHECK(j.at("terms").size() == 2);
        CHECK(series_from_json(j) == f.series());
        CHECK(*series_from_json(j).trunc(0) == 5);
    }
}

TEST_SUITE("formal calculus properties")
{
    TEST_CASE("property: d/dx is a derivation")
    {
        Gen g(7);
        for (int trial = 0; trial < 100; ++trial) {
            const LogSeries f = g.log_series(2, -2, 6, 2, 12);
            const LogSeries h = g.log_series(3, -1, 6, 2, 12);
            const LogSeries lhs = formal_ddx(f * h);
            const LogSeries rhs = formal_ddx(f) * h + f * formal_ddx(h);
            const auto [a, b] = common_truncation(lhs.series(), rhs.series());
            REQUIRE_MESSAGE(a == b, "f = ", f.to_string(), ", h = ", h.to_string());
        }
    }

    TEST_CASE("property: taylor shift at y = 0 and composition of shifts")
    {
        Gen g(8);
        const int order = 4;
        for (int trial = 0; trial < 100; ++trial) {
            const LogSeries f = g.log_series(2, -2, 5, 2, 100);
            MultiSeries base({"x"});
            for (const auto& [m, c] : f.series().terms()) {
                base.add_term(m, c);
            }
            const MultiSeries once = taylor_shift(base, 0, "y", order);
            MultiSeries at_zero({"x"});
            for (const auto& [m, c] : once.terms()) {
                if (m.exps[1] == 0) {
                    at_zero.add_term(Monomial({m.exps[0]}, {m.logs[0]}), c);
                }
            }
            REQUIRE(at_zero == base);

            // e^{w d/dx} e^{y d/dx} f against e^{s d/dx} f with s = y + w expanded binomially
            const MultiSeries twice = taylor_shift(once, 0, "w", order);
            const MultiSeries single = taylor_shift(base, 0, "s", order);
            MultiSeries expected({"x", "y", "w"});
            for (const auto& [m, c] : single.terms()) {
                const long k = to_long(m.exps[1]);
                for (long i = 0; i <= k; ++i) {
                    expected.add_term(Monomial({m.exps[0], Rational(i), Rational(k - i)}, {m.logs[0], 0, 0}),
                                      c * Scalar(Rational(binomial(k, i))));
                }
            }
            REQUIRE(low_degree(twice, order) == expected);
        }
    }

    TEST_CASE("property: scale exponential is the substitution x -> x e^y on monomials")
    {
        Gen g(9);
        const int order = 5;
        for (int trial = 0; trial < 100; ++trial) {
            Rational n(g.integer(-24, 24), g.integer(1, 4));
            n.canonicalize();
            const int m = g.integer(0, 3);
            const MultiSeries got = scale_exponential(x_pow(n, m), order);
            // x^n e^{n y} (log x + y)^m, expanded by hand
            MultiSeries expected({"x", "y"});
            for (int b = 0; b <= m; ++b) {
                for (int a = 0; a + b <= order; ++a) {
                    Rational na = 1;
                    for (int i = 0; i < a; ++i) {
                        na *= n;
                    }
                    const Rational c = Rational(binomial(m, b)) * na / Rational(test::fact(a));
                    expected.add_term(Monomial({n, Rational(a + b)}, {m - b, 0}), Scalar(c));
                }
            }
            REQUIRE_MESSAGE(got == expected, "n = ", to_string(n), ", m = ", m);
        }
    }

    TEST_CASE("property: exp and log(1 - t) are inverse")
    {
        Gen g(10);
        for (int trial = 0; trial < 100; ++trial) {
            LogSeries t = g.log_series(2, 1, 12, 0, 12);
            t.truncate(12);
            if (t.is_zero()) {
                continue;
            }
            LogSeries one = x_pow(0);
            one.truncate(12);
            REQUIRE(exp_series(log1m_series(t)) == one - t);
            REQUIRE(log1m_series(one - exp_series(t)) == t);
        }
    }
}
