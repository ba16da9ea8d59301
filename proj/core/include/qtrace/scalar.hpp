#pragma once

#include <complex>
#include <map>
#include <stdexcept>
#include <string>

#include "qtrace/rational.hpp"

namespace qtrace {

using Complex = std::complex<double>;

/// Thrown when exact and floating scalars are mixed in one operation.
class ScalarKindMismatch : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// re + i*im with rational parts.
struct GaussRational {
    Rational re;
    Rational im;

    bool is_zero() const { return re == 0 && im == 0; }

    friend GaussRational operator+(const GaussRational& a, const GaussRational& b) { return {a.re + b.re, a.im + b.im}; }
    friend GaussRational operator-(const GaussRational& a, const GaussRational& b) { return {a.re - b.re, a.im - b.im}; }
    friend GaussRational operator*(const GaussRational& a, const GaussRational& b)
    {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend bool operator==(const GaussRational& a, const GaussRational& b) { return a.re == b.re && a.im == b.im; }
};

/// Coefficient ring of every series in the library.
///
/// An exact scalar is a finite sum  sum_p (re_p + i im_p) pi^p  with rational
/// re_p, im_p; this holds 2 pi i, the even zeta values and every constant of the
/// Eisenstein and Weierstrass expansions. A numeric scalar is a complex double.
/// Exact values embed into numeric ones through to_numeric().
class Scalar {
public:
    enum class Kind { exact, numeric };
    using PiTerms = std::map<int, GaussRational>;

    Scalar() = default;
    Scalar(int v) : Scalar(Rational(v)) {}
    Scalar(const Rational& r);
    Scalar(Complex c) : kind_(Kind::numeric), value_(c) {}

    /// c * pi^power
    static Scalar pi_power(int power, GaussRational c = {1, 0});
    /// i * pi
    static Scalar pi_i() { return pi_power(1, {0, 1}); }
    /// (2 pi i)^n
    static Scalar two_pi_i_pow(int n);
    static Scalar imaginary_unit() { return pi_power(0, {0, 1}); }

    Kind kind() const { return kind_; }
    bool is_exact() const { return kind_ == Kind::exact; }
    bool is_zero() const;

    const PiTerms& pi_terms() const;
    Complex value() const;
    Scalar to_numeric() const { return Scalar(value()); }

    /// Pure rational value (only pi^0 with zero imaginary part), if any.
    bool is_rational() const;
    Rational as_rational() const;

    Scalar& operator+=(const Scalar& o);
    Scalar& operator-=(const Scalar& o);
    Scalar& operator*=(const Scalar& o);
    Scalar& operator/=(const Rational& r);
    /// Multiplication by a rational; valid for both kinds.
    Scalar scaled(const Rational& r) const;

    friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
    friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
    friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }
    friend Scalar operator/(Scalar a, const Rational& r) { return a /= r; }
    Scalar operator-() const;

    friend bool operator==(const Scalar& a, const Scalar& b);

    std::string to_string() const;

private:
    void check_kind(const Scalar& o, const char* op) const;
    void prune();

    Kind kind_ = Kind::exact;
    PiTerms exact_;
    Complex value_{};
};

Scalar pow(const Scalar& s, unsigned n);

}  // namespace qtrace
