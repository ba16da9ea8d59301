#pragma once

#include <optional>
#include <string>

#include "qtrace/series.hpp"

namespace qtrace {

/// Series in one variable x and log x:  sum w_{n,m} x^n (log x)^m  with
/// rational n below the truncation order and m <= max_logpower.
class LogSeries {
public:
    explicit LogSeries(std::string var = "x", Scalar::Kind kind = Scalar::Kind::exact);
    explicit LogSeries(MultiSeries s);

    /// c x^e (log x)^l
    static LogSeries monomial(const Rational& e, int l = 0, const Scalar& c = Scalar(1), std::string var = "x");

    const MultiSeries& series() const { return s_; }
    const std::string& var() const { return s_.vars().front(); }
    Scalar::Kind kind() const { return s_.kind(); }

    const std::optional<Rational>& trunc() const { return s_.trunc(0); }
    LogSeries& truncate(const Rational& order);
    LogSeries& set_max_logpower(int bound);
    int max_logpower() const { return s_.max_logpower(); }

    void add_term(const Rational& e, int l, const Scalar& c) { s_.add_term(mono(e, l), c); }
    Scalar coefficient(const Rational& e, int l = 0) const { return s_.coefficient(mono(e, l)); }
    bool is_zero() const { return s_.is_zero(); }
    std::optional<Rational> valuation() const { return s_.valuation(0); }

    friend LogSeries operator+(const LogSeries& a, const LogSeries& b) { return LogSeries(a.s_ + b.s_); }
    friend LogSeries operator-(const LogSeries& a, const LogSeries& b) { return LogSeries(a.s_ - b.s_); }
    friend LogSeries operator*(const LogSeries& a, const LogSeries& b) { return LogSeries(a.s_ * b.s_); }
    friend LogSeries operator*(const LogSeries& a, const Scalar& c) { return LogSeries(a.s_ * c); }
    LogSeries operator-() const { return LogSeries(-s_); }
    friend bool operator==(const LogSeries& a, const LogSeries& b) { return a.s_ == b.s_; }

    std::string to_string() const { return s_.to_string(); }

private:
    MultiSeries s_;
};

/// Copy of s with one more variable appended; every existing term has
/// exponent 0 in it.
MultiSeries with_variable(const MultiSeries& s, const std::string& name);

/// d/dx applied term by term:  n w x^{n-1} (log x)^m + m w x^{n-1} (log x)^{m-1}.
LogSeries formal_ddx(const LogSeries& f);

/// sum_{k <= order} shift^k / k! (d/dv)^k f, in the variables of f plus a new
/// variable named shift_var.
MultiSeries taylor_shift(const MultiSeries& f, std::size_t v, const std::string& shift_var, int order);
MultiSeries taylor_shift(const LogSeries& f, int y_order, const std::string& shift_var = "y");

/// sum_{k <= order} y^k / k! (v d/dv)^k f.
MultiSeries scale_exponential(const MultiSeries& f, std::size_t v, const std::string& shift_var, int order);
MultiSeries scale_exponential(const LogSeries& f, int y_order, const std::string& shift_var = "y");

/// e^t and log(1 - t) = -sum t^n / n. t must have strictly positive minimal
/// exponent and a finite truncation order.
LogSeries exp_series(const LogSeries& t);
LogSeries log1m_series(const LogSeries& t);

}  // namespace qtrace
