#include "qtrace/series.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qtrace {

bool operator<(const Monomial& a, const Monomial& b)
{
    const auto n = std::min(a.exps.size(), b.exps.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (a.exps[i] != b.exps[i]) {
            return a.exps[i] < b.exps[i];
        }
    }
    if (a.exps.size() != b.exps.size()) {
        return a.exps.size() < b.exps.size();
    }
    return a.logs < b.logs;
}

std::string Monomial::to_string(const std::vector<std::string>& vars) const
{
    std::ostringstream os;
    bool any = false;
    for (std::size_t v = 0; v < exps.size(); ++v) {
        const auto& name = v < vars.size() ? vars[v] : "v" + std::to_string(v);
        if (exps[v] != 0) {
            os << (any ? "*" : "") << name << "^" << qtrace::to_string(exps[v]);
            any = true;
        }
        if (logs[v] != 0) {
            os << (any ? "*" : "") << "log(" << name << ")^" << logs[v];
            any = true;
        }
    }
    return any ? os.str() : "1";
}

std::optional<Rational> min_trunc(const std::optional<Rational>& a, const std::optional<Rational>& b)
{
    if (!a) {
        return b;
    }
    if (!b) {
        return a;
    }
    return std::min(*a, *b);
}

MultiSeries::MultiSeries(std::vector<std::string> vars, Scalar::Kind kind)
    : vars_(std::move(vars)), kind_(kind), trunc_(vars_.size()), integral_(vars_.size(), false)
{
}

MultiSeries MultiSeries::constant(std::vector<std::string> vars, const Scalar& c)
{
    MultiSeries s(std::move(vars), c.kind());
    s.add_term(Monomial(s.nvars()), c);
    return s;
}

MultiSeries MultiSeries::variable(std::vector<std::string> vars, std::size_t v)
{
    MultiSeries s(std::move(vars));
    Monomial m(s.nvars());
    m.exps.at(v) = 1;
    s.add_term(m, Scalar(1));
    return s;
}

std::size_t MultiSeries::var_index(const std::string& name) const
{
    const auto it = std::find(vars_.begin(), vars_.end(), name);
    if (it == vars_.end()) {
        throw SeriesError("series has no variable '" + name + "'");
    }
    return static_cast<std::size_t>(it - vars_.begin());
}

MultiSeries& MultiSeries::truncate(std::size_t v, const Rational& order)
{
    trunc_.at(v) = min_trunc(trunc_[v], order);
    for (auto it = terms_.begin(); it != terms_.end();) {
        it = it->first.exps[v] >= *trunc_[v] ? terms_.erase(it) : std::next(it);
    }
    return *this;
}

MultiSeries& MultiSeries::set_integral(std::size_t v, bool on)
{
    if (on) {
        for (const auto& [m, c] : terms_) {
            if (!is_integer(m.exps[v])) {
                throw SeriesError("non-integral exponent in Laurent variable " + vars_[v]);
            }
        }
    }
    integral_.at(v) = on;
    return *this;
}

MultiSeries& MultiSeries::set_max_logpower(int bound)
{
    for (std::size_t v = 0; v < nvars(); ++v) {
        if (max_log(v) > bound) {
            throw LogPowerOverflow("existing log power exceeds new bound " + std::to_string(bound));
        }
    }
    max_logpower_ = bound;
    return *this;
}

MultiSeries& MultiSeries::set_max_denominator(int bound)
{
    max_denominator_ = bound;
    return *this;
}

MultiSeries& MultiSeries::set_zero_epsilon(double eps)
{
    zero_epsilon_ = eps;
    return *this;
}

bool MultiSeries::beyond_truncation(const Monomial& m) const
{
    for (std::size_t v = 0; v < nvars(); ++v) {
        if (trunc_[v] && m.exps[v] >= *trunc_[v]) {
            return true;
        }
    }
    return false;
}

void MultiSeries::add_term(const Monomial& m, const Scalar& c)
{
    if (m.exps.size() != nvars() || m.logs.size() != nvars()) {
        throw SeriesError("monomial arity does not match series variables");
    }
    if (c.kind() != kind_) {
        throw ScalarKindMismatch("scalar-kind mismatch: adding " + c.to_string() + " to series");
    }
    for (std::size_t v = 0; v < nvars(); ++v) {
        if (m.logs[v] < 0) {
            throw SeriesError("negative log power");
        }
        if (m.logs[v] > max_logpower_) {
            throw LogPowerOverflow("log power " + std::to_string(m.logs[v]) + " of " + vars_[v] +
                                   " exceeds bound " + std::to_string(max_logpower_));
        }
        if (integral_[v] && !is_integer(m.exps[v])) {
            throw SeriesError("non-integral exponent " + qtrace::to_string(m.exps[v]) + " in Laurent variable " +
                              vars_[v]);
        }
        if (m.exps[v].get_den() > max_denominator_) {
            throw SeriesError("exponent " + qtrace::to_string(m.exps[v]) + " exceeds denominator bound " +
                              std::to_string(max_denominator_));
        }
    }
    if (c.is_zero() || beyond_truncation(m)) {
        return;
    }
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
    }
    const bool vanished = it->second.is_zero() ||
                          (kind_ == Scalar::Kind::numeric && std::abs(it->second.value()) <= zero_epsilon_);
    if (vanished) {
        terms_.erase(it);
    }
}

Scalar MultiSeries::coefficient(const Monomial& m) const
{
    const auto it = terms_.find(m);
    if (it != terms_.end()) {
        return it->second;
    }
    return kind_ == Scalar::Kind::exact ? Scalar() : Scalar(Complex{});
}

std::optional<Rational> MultiSeries::valuation(std::size_t v) const
{
    std::optional<Rational> out;
    for (const auto& [m, c] : terms_) {
        if (!out || m.exps[v] < *out) {
            out = m.exps[v];
        }
    }
    return out;
}

std::optional<Rational> MultiSeries::max_exponent(std::size_t v) const
{
    std::optional<Rational> out;
    for (const auto& [m, c] : terms_) {
        if (!out || m.exps[v] > *out) {
            out = m.exps[v];
        }
    }
    return out;
}

int MultiSeries::max_log(std::size_t v) const
{
    int out = 0;
    for (const auto& [m, c] : terms_) {
        out = std::max(out, m.logs[v]);
    }
    return out;
}

void MultiSeries::check_compatible(const MultiSeries& o, const char* op) const
{
    if (vars_ != o.vars_) {
        throw SeriesError(std::string("variable mismatch in series ") + op);
    }
    if (kind_ != o.kind_) {
        throw ScalarKindMismatch(std::string("scalar-kind mismatch in series ") + op);
    }
}

void MultiSeries::merge_metadata(const MultiSeries& o)
{
    for (std::size_t v = 0; v < nvars(); ++v) {
        integral_[v] = integral_[v] || o.integral_[v];
    }
    max_logpower_ = std::max(max_logpower_, o.max_logpower_);
    max_denominator_ = std::max(max_denominator_, o.max_denominator_);
    zero_epsilon_ = std::max(zero_epsilon_, o.zero_epsilon_);
}

MultiSeries& MultiSeries::operator+=(const MultiSeries& o)
{
    check_compatible(o, "addition");
    merge_metadata(o);
    for (std::size_t v = 0; v < nvars(); ++v) {
        if (o.trunc_[v]) {
            truncate(v, *o.trunc_[v]);
        }
    }
    for (const auto& [m, c] : o.terms_) {
        add_term(m, c);
    }
    return *this;
}

MultiSeries& MultiSeries::operator-=(const MultiSeries& o) { return *this += -o; }

MultiSeries& MultiSeries::operator*=(const Scalar& c)
{
    if (c.kind() != kind_) {
        throw ScalarKindMismatch("scalar-kind mismatch in series scaling");
    }
    TermMap out;
    for (auto& [m, coef] : terms_) {
        Scalar p = coef * c;
        if (!p.is_zero()) {
            out.emplace(m, std::move(p));
        }
    }
    terms_ = std::move(out);
    return *this;
}

MultiSeries MultiSeries::operator-() const
{
    MultiSeries out = *this;
    for (auto& [m, c] : out.terms_) {
        c = -c;
    }
    return out;
}

namespace {

// Lowest exponent of v that is not known to be zero: the valuation when terms
// exist, else the truncation order (nullopt = exactly zero, infinite).
std::optional<Rational> effective_valuation(const MultiSeries& s, std::size_t v)
{
    if (auto val = s.valuation(v)) {
        return val;
    }
    return s.trunc(v);
}

std::optional<Rational> add_opt(const std::optional<Rational>& a, const std::optional<Rational>& b)
{
    if (!a || !b) {
        return std::nullopt;
    }
    return *a + *b;
}

}  // namespace

MultiSeries operator*(const MultiSeries& a, const MultiSeries& b)
{
    a.check_compatible(b, "multiplication");
    MultiSeries out = a.empty_like();
    out.merge_metadata(b);
    for (std::size_t v = 0; v < a.nvars(); ++v) {
        // a*b is known wherever both factors' unknown tails stay out of range.
        out.trunc_[v] = min_trunc(add_opt(a.trunc_[v], effective_valuation(b, v)),
                                  add_opt(b.trunc_[v], effective_valuation(a, v)));
    }
    for (const auto& [ma, ca] : a.terms_) {
        for (const auto& [mb, cb] : b.terms_) {
            Monomial m(a.nvars());
            for (std::size_t v = 0; v < a.nvars(); ++v) {
                m.exps[v] = ma.exps[v] + mb.exps[v];
                m.logs[v] = ma.logs[v] + mb.logs[v];
            }
            if (out.beyond_truncation(m)) {
                continue;
            }
            out.add_term(m, ca * cb);
        }
    }
    return out;
}

MultiSeries MultiSeries::derivative(std::size_t v) const
{
    MultiSeries out = empty_like();
    if (trunc_.at(v)) {
        out.trunc_[v] = *trunc_[v] - 1;
    }
    for (const auto& [m, c] : terms_) {
        Monomial d = m;
        d.exps[v] -= 1;
        if (m.exps[v] != 0) {
            out.add_term(d, c.scaled(m.exps[v]));
        }
        if (m.logs[v] > 0) {
            Monomial dl = d;
            dl.logs[v] -= 1;
            out.add_term(dl, c.scaled(Rational(m.logs[v])));
        }
    }
    return out;
}

MultiSeries MultiSeries::euler(std::size_t v) const
{
    MultiSeries out = empty_like();
    for (const auto& [m, c] : terms_) {
        if (m.exps[v] != 0) {
            out.add_term(m, c.scaled(m.exps[v]));
        }
        if (m.logs[v] > 0) {
            Monomial dl = m;
            dl.logs[v] -= 1;
            out.add_term(dl, c.scaled(Rational(m.logs[v])));
        }
    }
    return out;
}

MultiSeries MultiSeries::shifted(std::size_t v, const Rational& shift) const
{
    MultiSeries out = empty_like();
    if (trunc_.at(v)) {
        out.trunc_[v] = *trunc_[v] + shift;
    }
    for (const auto& [m, c] : terms_) {
        Monomial s = m;
        s.exps[v] += shift;
        out.add_term(s, c);
    }
    return out;
}

MultiSeries MultiSeries::to_numeric() const
{
    MultiSeries out = empty_like();
    out.kind_ = Scalar::Kind::numeric;
    for (const auto& [m, c] : terms_) {
        out.add_term(m, c.to_numeric());
    }
    return out;
}

MultiSeries MultiSeries::empty_like() const
{
    MultiSeries out = *this;
    out.terms_.clear();
    return out;
}

std::string MultiSeries::to_string() const
{
    std::ostringstream os;
    bool first = true;
    for (const auto& [m, c] : terms_) {
        os << (first ? "" : " + ") << c.to_string() << "*" << m.to_string(vars_);
        first = false;
    }
    if (first) {
        os << "0";
    }
    for (std::size_t v = 0; v < nvars(); ++v) {
        if (trunc_[v]) {
            os << " + O(" << vars_[v] << "^" << qtrace::to_string(*trunc_[v]) << ")";
        }
    }
    return os.str();
}

std::pair<MultiSeries, MultiSeries> common_truncation(const MultiSeries& a, const MultiSeries& b)
{
    if (a.vars() != b.vars()) {
        throw SeriesError("variable mismatch in common truncation");
    }
    MultiSeries ca = a;
    MultiSeries cb = b;
    for (std::size_t v = 0; v < a.nvars(); ++v) {
        if (const auto t = min_trunc(a.trunc(v), b.trunc(v))) {
            ca.truncate(v, *t);
            cb.truncate(v, *t);
        }
    }
    return {std::move(ca), std::move(cb)};
}

}  // namespace qtrace
