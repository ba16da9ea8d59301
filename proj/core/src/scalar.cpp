#include "qtrace/scalar.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace qtrace {

Scalar::Scalar(const Rational& r)
{
    if (r != 0) {
        exact_.emplace(0, GaussRational{r, 0});
    }
}

Scalar Scalar::pi_power(int power, GaussRational c)
{
    Scalar s;
    if (!c.is_zero()) {
        s.exact_.emplace(power, std::move(c));
    }
    return s;
}

Scalar Scalar::two_pi_i_pow(int n)
{
    // (2 pi i)^n = 2^n i^n pi^n
    Rational two_n = n >= 0 ? Rational(Integer(1) << n) : Rational(1, Integer(1) << -n);
    GaussRational unit;
    switch (((n % 4) + 4) % 4) {
    case 0: unit = {1, 0}; break;
    case 1: unit = {0, 1}; break;
    case 2: unit = {-1, 0}; break;
    default: unit = {0, -1}; break;
    }
    return pi_power(n, {unit.re * two_n, unit.im * two_n});
}

bool Scalar::is_zero() const
{
    return kind_ == Kind::exact ? exact_.empty() : value_ == Complex{};
}

const Scalar::PiTerms& Scalar::pi_terms() const
{
    if (kind_ != Kind::exact) {
        throw ScalarKindMismatch("pi_terms() requested on a numeric scalar");
    }
    return exact_;
}

Complex Scalar::value() const
{
    if (kind_ == Kind::numeric) {
        return value_;
    }
    long double re = 0;
    long double im = 0;
    for (const auto& [p, c] : exact_) {
        const long double scale = std::pow(std::numbers::pi_v<long double>, static_cast<long double>(p));
        re += scale * static_cast<long double>(c.re.get_d());
        im += scale * static_cast<long double>(c.im.get_d());
    }
    return {static_cast<double>(re), static_cast<double>(im)};
}

bool Scalar::is_rational() const
{
    if (kind_ != Kind::exact) {
        return false;
    }
    if (exact_.empty()) {
        return true;
    }
    return exact_.size() == 1 && exact_.begin()->first == 0 && exact_.begin()->second.im == 0;
}

Rational Scalar::as_rational() const
{
    if (!is_rational()) {
        throw std::domain_error("scalar " + to_string() + " is not rational");
    }
    return exact_.empty() ? Rational(0) : exact_.begin()->second.re;
}

void Scalar::check_kind(const Scalar& o, const char* op) const
{
    if (kind_ != o.kind_) {
        throw ScalarKindMismatch(std::string("scalar-kind mismatch in ") + op);
    }
}

void Scalar::prune()
{
    for (auto it = exact_.begin(); it != exact_.end();) {
        it = it->second.is_zero() ? exact_.erase(it) : std::next(it);
    }
}

Scalar& Scalar::operator+=(const Scalar& o)
{
    check_kind(o, "addition");
    if (kind_ == Kind::numeric) {
        value_ += o.value_;
        return *this;
    }
    for (const auto& [p, c] : o.exact_) {
        auto [it, inserted] = exact_.try_emplace(p, c);
        if (!inserted) {
            it->second = it->second + c;
            if (it->second.is_zero()) {
                exact_.erase(it);
            }
        }
    }
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o) { return *this += -o; }

Scalar& Scalar::operator*=(const Scalar& o)
{
    check_kind(o, "multiplication");
    if (kind_ == Kind::numeric) {
        value_ *= o.value_;
        return *this;
    }
    PiTerms out;
    for (const auto& [p, a] : exact_) {
        for (const auto& [r, b] : o.exact_) {
            auto [it, inserted] = out.try_emplace(p + r, a * b);
            if (!inserted) {
                it->second = it->second + a * b;
            }
        }
    }
    exact_ = std::move(out);
    prune();
    return *this;
}

Scalar& Scalar::operator/=(const Rational& r)
{
    if (r == 0) {
        throw std::domain_error("scalar division by zero");
    }
    if (kind_ == Kind::numeric) {
        value_ /= r.get_d();
        return *this;
    }
    for (auto& [p, c] : exact_) {
        c.re /= r;
        c.im /= r;
    }
    return *this;
}

Scalar Scalar::scaled(const Rational& r) const
{
    if (r == 0) {
        return kind_ == Kind::exact ? Scalar() : Scalar(Complex{});
    }
    Scalar out = *this;
    if (kind_ == Kind::numeric) {
        out.value_ *= r.get_d();
        return out;
    }
    for (auto& [p, c] : out.exact_) {
        c.re *= r;
        c.im *= r;
    }
    return out;
}

Scalar Scalar::operator-() const
{
    Scalar out = *this;
    if (kind_ == Kind::numeric) {
        out.value_ = -value_;
        return out;
    }
    for (auto& [p, c] : out.exact_) {
        c.re = -c.re;
        c.im = -c.im;
    }
    return out;
}

bool operator==(const Scalar& a, const Scalar& b)
{
    if (a.kind_ != b.kind_) {
        return false;
    }
    return a.kind_ == Scalar::Kind::numeric ? a.value_ == b.value_ : a.exact_ == b.exact_;
}

std::string Scalar::to_string() const
{
    std::ostringstream os;
    if (kind_ == Kind::numeric) {
        os.precision(17);
        os << "(" << value_.real() << (value_.imag() < 0 ? "" : "+") << value_.imag() << "i)";
        return os.str();
    }
    if (exact_.empty()) {
        return "0";
    }
    bool first = true;
    for (const auto& [p, c] : exact_) {
        if (!first) {
            os << " + ";
        }
        first = false;
        os << "(" << qtrace::to_string(c.re);
        if (c.im != 0) {
            os << (c.im < 0 ? "" : "+") << qtrace::to_string(c.im) << "i";
        }
        os << ")";
        if (p != 0) {
            os << "*pi^" << p;
        }
    }
    return os.str();
}

Scalar pow(const Scalar& s, unsigned n)
{
    Scalar out = s.is_exact() ? Scalar(1) : Scalar(Complex{1.0, 0.0});
    for (unsigned i = 0; i < n; ++i) {
        out *= s;
    }
    return out;
}

}  // namespace qtrace
