#include "qtrace/log_series.hpp"

namespace qtrace {

namespace {

Scalar one_of(Scalar::Kind kind) { return kind == Scalar::Kind::exact ? Scalar(1) : Scalar(Complex{1.0, 0.0}); }

}  // namespace

LogSeries::LogSeries(std::string var, Scalar::Kind kind) : s_({std::move(var)}, kind) {}

LogSeries::LogSeries(MultiSeries s) : s_(std::move(s))
{
    if (s_.nvars() != 1) {
        throw SeriesError("LogSeries requires a single-variable series");
    }
}

LogSeries LogSeries::monomial(const Rational& e, int l, const Scalar& c, std::string var)
{
    LogSeries out(std::move(var), c.kind());
    out.add_term(e, l, c);
    return out;
}

LogSeries& LogSeries::truncate(const Rational& order)
{
    s_.truncate(0, order);
    return *this;
}

LogSeries& LogSeries::set_max_logpower(int bound)
{
    s_.set_max_logpower(bound);
    return *this;
}

MultiSeries with_variable(const MultiSeries& s, const std::string& name)
{
    auto vars = s.vars();
    vars.push_back(name);
    MultiSeries out(vars, s.kind());
    for (std::size_t v = 0; v < s.nvars(); ++v) {
        if (s.trunc(v)) {
            out.truncate(v, *s.trunc(v));
        }
        out.set_integral(v, s.integral(v));
    }
    out.set_max_logpower(s.max_logpower());
    out.set_max_denominator(s.max_denominator());
    for (const auto& [m, c] : s.terms()) {
        Monomial e = m;
        e.exps.emplace_back(0);
        e.logs.push_back(0);
        out.add_term(e, c);
    }
    return out;
}

LogSeries formal_ddx(const LogSeries& f) { return LogSeries(f.series().derivative(0)); }

namespace {

template <typename Step>
MultiSeries operator_exponential(const MultiSeries& f, const std::string& shift_var, int order, Step step)
{
    if (order < 0) {
        throw SeriesError("shift order must be non-negative");
    }
    MultiSeries out = with_variable(f.empty_like(), shift_var);
    const std::size_t y = out.nvars() - 1;
    out.truncate(y, order + 1);

    MultiSeries power = f;
    for (int k = 0; k <= order; ++k) {
        MultiSeries term = with_variable(power, shift_var).shifted(y, k) * (one_of(f.kind()) / Rational(factorial(k)));
        out += term;
        if (k < order) {
            power = step(power);
        }
    }
    return out;
}

}  // namespace

MultiSeries taylor_shift(const MultiSeries& f, std::size_t v, const std::string& shift_var, int order)
{
    return operator_exponential(f, shift_var, order, [v](const MultiSeries& g) { return g.derivative(v); });
}

MultiSeries taylor_shift(const LogSeries& f, int y_order, const std::string& shift_var)
{
    return taylor_shift(f.series(), 0, shift_var, y_order);
}

MultiSeries scale_exponential(const MultiSeries& f, std::size_t v, const std::string& shift_var, int order)
{
    return operator_exponential(f, shift_var, order, [v](const MultiSeries& g) { return g.euler(v); });
}

MultiSeries scale_exponential(const LogSeries& f, int y_order, const std::string& shift_var)
{
    return scale_exponential(f.series(), 0, shift_var, y_order);
}

namespace {

void require_composable(const LogSeries& t, const char* what)
{
    if (!t.trunc()) {
        throw SeriesError(std::string(what) + " requires an argument with a finite truncation order");
    }
    if (const auto val = t.valuation(); val && *val <= 0) {
        throw SeriesError(std::string(what) + ": nonpositive minimal exponent " + to_string(*val));
    }
}

}  // namespace

LogSeries exp_series(const LogSeries& t)
{
    require_composable(t, "exp_series");
    LogSeries out = LogSeries::monomial(0, 0, one_of(t.kind()), t.var());
    out.set_max_logpower(t.max_logpower());
    LogSeries power = out;
    for (unsigned long n = 1; !power.is_zero(); ++n) {
        power = power * t;
        power.truncate(*t.trunc());
        out = out + power * (one_of(t.kind()) / Rational(factorial(n)));
    }
    out.truncate(*t.trunc());
    return out;
}

LogSeries log1m_series(const LogSeries& t)
{
    require_composable(t, "log1m_series");
    LogSeries out(t.var(), t.kind());
    out.set_max_logpower(t.max_logpower());
    out.truncate(*t.trunc());
    LogSeries power = LogSeries::monomial(0, 0, one_of(t.kind()), t.var());
    power.set_max_logpower(t.max_logpower());
    for (long n = 1;; ++n) {
        power = power * t;
        power.truncate(*t.trunc());
        if (power.is_zero()) {
            break;
        }
        out = out - power * (one_of(t.kind()) / Rational(n));
    }
    return out;
}

}  // namespace qtrace
