#include "qtrace/elliptic.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "qtrace/number_theory.hpp"

namespace qtrace {

namespace {

Monomial zq(long z, long q)
{
    return Monomial({Rational(z), Rational(q)}, {0, 0});
}

Rational int_pow(long base, unsigned e)
{
    Integer out;
    mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(std::labs(base)), e);
    if (base < 0 && e % 2 == 1) {
        out = -out;
    }
    return Rational(out);
}

void require_non_negative(int value, const char* what)
{
    if (value < 0) {
        throw std::invalid_argument(std::string(what) + " must be non-negative");
    }
}

}  // namespace

Eisenstein eisenstein(int k, int N)
{
    require_non_negative(k, "k");
    require_non_negative(N, "N");
    Eisenstein g;
    g.k = k;
    g.weight = 2 * k + 2;
    g.expansion = MultiSeries({"q"});
    g.expansion.truncate(0, N + 1);

    // constant 2 zeta(2k+2); for k = 0 this is pi^2/3
    g.expansion.add_term(mono(0), zeta_even(static_cast<unsigned>(k + 1)).scaled(2));

    const Scalar prefactor = Scalar::two_pi_i_pow(2 * k + 2).scaled(Rational(2, factorial(2 * k + 1)));
    // sum_l l^{2k+1} q^l / (1 - q^l), with 1/(1 - q^l) = sum_{j>=0} q^{lj}
    for (long l = 1; l <= N; ++l) {
        const Rational weight = int_pow(l, static_cast<unsigned>(2 * k + 1));
        for (long power = l; power <= N; power += l) {
            g.expansion.add_term(mono(power), prefactor.scaled(weight));
        }
    }
    return g;
}

Kernel kernel_P(int m, int x_range, int q_order)
{
    require_non_negative(m, "m");
    require_non_negative(x_range, "x_range");
    require_non_negative(q_order, "q_order");
    Kernel kernel;
    kernel.m = m;
    MultiSeries& s = kernel.expansion;
    s = MultiSeries({"x", "q"});
    s.set_integral(0);
    s.truncate(0, x_range + 1);
    s.truncate(1, q_order + 1);

    const Scalar prefactor = Scalar::two_pi_i_pow(m + 1) / Rational(factorial(m));
    const Rational sign = (m % 2 == 0) ? Rational(1) : Rational(-1);
    for (long l = 1; l <= x_range; ++l) {
        const Scalar c = prefactor.scaled(int_pow(l, m));
        for (long power = 0; power <= q_order; power += l) {
            s.add_term(zq(l, power), c);
        }
    }
    for (long l = 1; l <= q_order; ++l) {
        const Scalar c = prefactor.scaled(-sign * int_pow(l, m));
        for (long power = l; power <= q_order; power += l) {
            s.add_term(zq(-l, power), c);
        }
    }
    return kernel;
}

MultiSeries kernel_P_at_qz(int m, int z_order, int q_order)
{
    require_non_negative(m, "m");
    require_non_negative(z_order, "z_order");
    MultiSeries out({"z", "q"});
    out.set_integral(0);
    out.truncate(0, z_order + 1);
    out.truncate(1, q_order + 1);

    // q^0: (2 pi i)^{m+1}/m! * [m! (-t)^{-m-1} + sum_j zeta(-m-j) t^j/j!], t = 2 pi i z
    const Rational pole_sign = ((m + 1) % 2 == 0) ? Rational(1) : Rational(-1);
    out.add_term(zq(-(m + 1), 0), Scalar(pole_sign));
    for (int j = 0; j <= z_order; ++j) {
        const Rational c = zeta_nonpositive(static_cast<unsigned>(m + j)) /
                           Rational(factorial(static_cast<unsigned long>(m)) * factorial(static_cast<unsigned long>(j)));
        out.add_term(zq(j, 0), Scalar::two_pi_i_pow(m + 1 + j).scaled(c));
    }

    // q^n, n >= 1: finite combinations of x^e, with x^e = e^{2 pi i e z}
    const Kernel kernel = kernel_P(m, q_order, q_order);
    for (const auto& [mono_xq, c] : kernel.expansion.terms()) {
        const Rational& q_exp = mono_xq.exps[1];
        if (q_exp == 0) {
            continue;
        }
        const long e = to_long(mono_xq.exps[0]);
        for (int j = 0; j <= z_order; ++j) {
            const Rational taylor = int_pow(e, static_cast<unsigned>(j)) / Rational(factorial(static_cast<unsigned long>(j)));
            out.add_term(zq(j, to_long(q_exp)), (c * Scalar::two_pi_i_pow(j)).scaled(taylor));
        }
    }
    return out;
}

MultiSeries lift_q_series(const MultiSeries& f, const std::vector<std::string>& vars)
{
    MultiSeries out(vars, f.kind());
    const std::size_t qi = out.var_index("q");
    const std::size_t src = f.var_index("q");
    if (f.trunc(src)) {
        out.truncate(qi, *f.trunc(src));
    }
    out.set_max_logpower(f.max_logpower());
    for (const auto& [m, c] : f.terms()) {
        Monomial lifted(vars.size());
        lifted.exps[qi] = m.exps[src];
        lifted.logs[qi] = m.logs[src];
        out.add_term(lifted, c);
    }
    return out;
}

WpSeries wp_series(int m, int z_order, int q_order)
{
    return wp_series(m, z_order, q_order, [](int k, int n) { return eisenstein(k, n).expansion; });
}

WpSeries wp_series(int m, int z_order, int q_order, const EisensteinSource& source)
{
    if (m < 1) {
        throw std::invalid_argument("wp_series requires m >= 1");
    }
    require_non_negative(q_order, "q_order");
    WpSeries wp;
    wp.m = m;
    wp.weight = m;
    const std::vector<std::string> vars{"z", "q"};
    MultiSeries& s = wp.expansion;
    s = MultiSeries(vars);
    s.set_integral(0);
    s.truncate(0, z_order + 1);
    s.truncate(1, q_order + 1);

    s.add_term(zq(-m, 0), Scalar(1));
    const Rational sign = (m % 2 == 0) ? Rational(1) : Rational(-1);
    for (int k = 1; 2 * k + 2 - m <= z_order; ++k) {
        const Rational b(binomial(2 * k + 1, m - 1));
        if (b == 0) {
            continue;
        }
        MultiSeries g = lift_q_series(source(k, q_order), vars);
        s += g.shifted(0, 2 * k + 2 - m) * Scalar(sign * b);
    }
    return wp;
}

CheckReport wp_recursion_check(const WpSeries& wp_m, const WpSeries& wp_next)
{
    if (wp_next.m != wp_m.m + 1) {
        throw std::invalid_argument("wp_recursion_check expects consecutive indices");
    }
    const MultiSeries rhs = wp_m.expansion.derivative(0) * Scalar(Rational(-1, wp_m.m));
    CheckReport report = compare_series("wp_recursion_m" + std::to_string(wp_m.m), wp_next.expansion, rhs);
    report.details = {{"m", wp_m.m}};
    return report;
}

CheckReport wp_recursion_check(int m, int z_order, int q_order)
{
    // wp_m needs one extra z-order so the derivative reaches z_order
    return wp_recursion_check(wp_series(m, z_order + 1, q_order), wp_series(m + 1, z_order, q_order));
}

CheckReport wp_P_relation_check(int m, int z_order, int q_order)
{
    return wp_P_relation_check(m, z_order, q_order, eisenstein(0, q_order).expansion);
}

CheckReport wp_P_relation_check(int m, int z_order, int q_order, const MultiSeries& g2)
{
    if (m < 1) {
        throw std::invalid_argument("wp_P_relation_check requires m >= 1");
    }
    const std::vector<std::string> vars{"z", "q"};
    MultiSeries correction = lift_q_series(g2, vars) * MultiSeries::variable(vars, 0);
    correction -= MultiSeries::constant(vars, Scalar::pi_i());
    for (int d = 0; d < m - 1; ++d) {
        correction = correction.derivative(0);
    }
    MultiSeries rhs = kernel_P_at_qz(m - 1, z_order, q_order) - correction;
    if (m % 2 == 1) {
        rhs = -rhs;
    }
    CheckReport report =
        compare_series("wp_P_relation_m" + std::to_string(m), wp_series(m, z_order, q_order).expansion, rhs);
    report.details = {{"m", m}, {"z_order", z_order}, {"q_order", q_order}};
    return report;
}

ModularSeries serre_derivative(const MultiSeries& f, int k)
{
    if (f.nvars() != 1) {
        throw std::invalid_argument("serre_derivative expects a series in q");
    }
    const bool exact = f.kind() == Scalar::Kind::exact;
    const Scalar two_pi_i_sq = exact ? Scalar::two_pi_i_pow(2) : Scalar::two_pi_i_pow(2).to_numeric();
    ModularSeries out;
    out.weight = k + 2;
    out.expansion = f.euler(0) * two_pi_i_sq;
    if (k == 0) {
        return out;
    }
    if (!f.trunc(0)) {
        throw SeriesError("serre_derivative with k != 0 needs a truncated input");
    }
    // G~_2 up to q^N with N + 1 >= trunc(f)
    Integer ceil_trunc;
    mpz_cdiv_q(ceil_trunc.get_mpz_t(), f.trunc(0)->get_num_mpz_t(), f.trunc(0)->get_den_mpz_t());
    const long n = std::max(0L, ceil_trunc.get_si() - 1);
    const MultiSeries g2 = eisenstein(0, static_cast<int>(n)).expansion;
    MultiSeries g2_in_f(f.vars(), f.kind());
    g2_in_f.truncate(0, *g2.trunc(0));
    for (const auto& [m, c] : g2.terms()) {
        g2_in_f.add_term(m, exact ? c : c.to_numeric());
    }
    out.expansion += g2_in_f * f * (exact ? Scalar(k) : Scalar(Complex(k, 0)));
    return out;
}

}  // namespace qtrace
