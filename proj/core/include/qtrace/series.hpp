#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qtrace/rational.hpp"
#include "qtrace/scalar.hpp"

namespace qtrace {

class SeriesError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A product would carry a power of log beyond the series' configured bound.
class LogPowerOverflow : public SeriesError {
public:
    using SeriesError::SeriesError;
};

/// prod_v  v^{exps[v]} (log v)^{logs[v]}
struct Monomial {
    std::vector<Rational> exps;
    std::vector<int> logs;

    Monomial() = default;
    explicit Monomial(std::size_t nvars) : exps(nvars), logs(nvars, 0) {}
    Monomial(std::vector<Rational> e, std::vector<int> l) : exps(std::move(e)), logs(std::move(l)) {}

    std::size_t size() const { return exps.size(); }
    std::string to_string(const std::vector<std::string>& vars) const;

    friend bool operator==(const Monomial& a, const Monomial& b) { return a.exps == b.exps && a.logs == b.logs; }
    friend bool operator<(const Monomial& a, const Monomial& b);
};

/// Single-variable shorthand x^e (log x)^l.
inline Monomial mono(const Rational& e, int l = 0) { return Monomial({e}, {l}); }

struct SeriesDefaults {
    static constexpr int max_denominator = 24;
    static constexpr int max_logpower = 8;
};

/// Truncated formal series in several commuting variables with rational
/// exponents and bounded powers of their logarithms.
///
/// Each variable may carry a truncation order T: monomials whose exponent in
/// that variable is >= T are unknown and never stored. Zero coefficients are
/// never stored, so two series are equal iff their term maps are equal.
class MultiSeries {
public:
    using TermMap = std::map<Monomial, Scalar>;

    explicit MultiSeries(std::vector<std::string> vars = {"x"}, Scalar::Kind kind = Scalar::Kind::exact);

    static MultiSeries constant(std::vector<std::string> vars, const Scalar& c);
    static MultiSeries variable(std::vector<std::string> vars, std::size_t v);

    const std::vector<std::string>& vars() const { return vars_; }
    std::size_t nvars() const { return vars_.size(); }
    std::size_t var_index(const std::string& name) const;

    Scalar::Kind kind() const { return kind_; }

    const std::optional<Rational>& trunc(std::size_t v) const { return trunc_.at(v); }
    /// Lowers the truncation order of v to min(current, order), dropping terms.
    MultiSeries& truncate(std::size_t v, const Rational& order);

    bool integral(std::size_t v) const { return integral_.at(v); }
    MultiSeries& set_integral(std::size_t v, bool on = true);

    int max_logpower() const { return max_logpower_; }
    MultiSeries& set_max_logpower(int bound);
    int max_denominator() const { return max_denominator_; }
    MultiSeries& set_max_denominator(int bound);
    /// Numeric coefficients with |c| <= eps are dropped (default 0: only exact zeros).
    MultiSeries& set_zero_epsilon(double eps);

    void add_term(const Monomial& m, const Scalar& c);
    Scalar coefficient(const Monomial& m) const;
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    /// Smallest exponent of v among stored terms.
    std::optional<Rational> valuation(std::size_t v) const;
    std::optional<Rational> max_exponent(std::size_t v) const;
    int max_log(std::size_t v) const;

    MultiSeries& operator+=(const MultiSeries& o);
    MultiSeries& operator-=(const MultiSeries& o);
    MultiSeries& operator*=(const Scalar& c);
    MultiSeries operator-() const;
    friend MultiSeries operator+(MultiSeries a, const MultiSeries& b) { return a += b; }
    friend MultiSeries operator-(MultiSeries a, const MultiSeries& b) { return a -= b; }
    friend MultiSeries operator*(const MultiSeries& a, const MultiSeries& b);
    friend MultiSeries operator*(MultiSeries a, const Scalar& c) { return a *= c; }
    friend MultiSeries operator*(const Scalar& c, MultiSeries a) { return a *= c; }

    /// Formal d/dv including the log term; the truncation order of v drops by 1.
    MultiSeries derivative(std::size_t v) const;
    /// v d/dv; truncation unchanged.
    MultiSeries euler(std::size_t v) const;
    /// Multiplies every term by v^shift.
    MultiSeries shifted(std::size_t v, const Rational& shift) const;

    MultiSeries to_numeric() const;
    /// Same metadata, no terms.
    MultiSeries empty_like() const;

    std::string to_string() const;

    friend bool operator==(const MultiSeries& a, const MultiSeries& b)
    {
        return a.vars_ == b.vars_ && a.kind_ == b.kind_ && a.terms_ == b.terms_;
    }

private:
    void check_compatible(const MultiSeries& o, const char* op) const;
    void merge_metadata(const MultiSeries& o);
    bool beyond_truncation(const Monomial& m) const;

    std::vector<std::string> vars_;
    Scalar::Kind kind_;
    std::vector<std::optional<Rational>> trunc_;
    std::vector<bool> integral_;
    int max_logpower_ = SeriesDefaults::max_logpower;
    int max_denominator_ = SeriesDefaults::max_denominator;
    double zero_epsilon_ = 0.0;
    TermMap terms_;
};

/// min of two optional truncation orders, where nullopt means "exact".
std::optional<Rational> min_trunc(const std::optional<Rational>& a, const std::optional<Rational>& b);

/// Copies of a and b cut to their common per-variable truncation.
std::pair<MultiSeries, MultiSeries> common_truncation(const MultiSeries& a, const MultiSeries& b);

}  // namespace qtrace
