#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qtrace/rational.hpp"

namespace qtrace {

/// Arithmetic policy for the two supported fields: exact rationals and
/// complex doubles compared with an absolute tolerance.
template <typename T>
struct Field;

template <>
struct Field<Rational> {
    static constexpr bool exact = true;
    static Rational zero() { return 0; }
    static Rational one() { return 1; }
    static bool is_zero(const Rational& x) { return x == 0; }
    static double magnitude(const Rational& x) { return std::abs(to_double(x)); }
    static Rational from_json(const nlohmann::json& j)
    {
        if (j.is_string()) {
            return parse_rational(j.get<std::string>());
        }
        if (j.is_number_integer()) {
            return Rational(j.get<long>());
        }
        if (j.is_number()) {
            Rational out;
            out = j.get<double>();
            return out;
        }
        if (j.is_array() && j.size() == 2) {
            if (!is_zero(from_json(j[1]))) {
                throw std::invalid_argument("exact mode takes rational entries; use float mode for complex data");
            }
            return from_json(j[0]);
        }
        throw std::invalid_argument("expected a rational entry, got " + j.dump());
    }
    static nlohmann::json to_json(const Rational& x) { return qtrace::to_string(x); }
    static std::string to_string(const Rational& x) { return qtrace::to_string(x); }
};

template <>
struct Field<std::complex<double>> {
    using C = std::complex<double>;
    static constexpr bool exact = false;
    static constexpr double tolerance = 1e-10;
    static C zero() { return {0.0, 0.0}; }
    static C one() { return {1.0, 0.0}; }
    static bool is_zero(const C& x) { return std::abs(x) <= tolerance; }
    static double magnitude(const C& x) { return std::abs(x); }
    static C from_json(const nlohmann::json& j)
    {
        if (j.is_number()) {
            return {j.get<double>(), 0.0};
        }
        if (j.is_string()) {
            return {to_double(parse_rational(j.get<std::string>())), 0.0};
        }
        if (j.is_array() && j.size() == 2) {
            return {from_json(j[0]).real(), from_json(j[1]).real()};
        }
        throw std::invalid_argument("expected a numeric entry, got " + j.dump());
    }
    static nlohmann::json to_json(const C& x) { return nlohmann::json::array({x.real(), x.imag()}); }
    static std::string to_string(const C& x)
    {
        return "(" + std::to_string(x.real()) + "," + std::to_string(x.imag()) + ")";
    }
};

template <typename T>
using Vec = std::vector<T>;

template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, Field<T>::zero()) {}

    static Matrix identity(std::size_t n)
    {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = Field<T>::one();
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    Vec<T> column(std::size_t c) const
    {
        Vec<T> out(rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            out[r] = (*this)(r, c);
        }
        return out;
    }

    Vec<T> operator*(const Vec<T>& v) const
    {
        if (v.size() != cols_) {
            throw std::invalid_argument("matrix-vector size mismatch");
        }
        Vec<T> out(rows_, Field<T>::zero());
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) {
                out[r] += (*this)(r, c) * v[c];
            }
        }
        return out;
    }

    friend Matrix operator*(const Matrix& a, const Matrix& b)
    {
        if (a.cols_ != b.rows_) {
            throw std::invalid_argument("matrix product size mismatch");
        }
        Matrix out(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const T& aik = a(i, k);
                if (Field<T>::is_zero(aik)) {
                    continue;
                }
                for (std::size_t j = 0; j < b.cols_; ++j) {
                    out(i, j) += aik * b(k, j);
                }
            }
        }
        return out;
    }

    Matrix& operator+=(const Matrix& o)
    {
        check_same(o);
        for (std::size_t i = 0; i < data_.size(); ++i) {
            data_[i] += o.data_[i];
        }
        return *this;
    }
    Matrix& operator-=(const Matrix& o)
    {
        check_same(o);
        for (std::size_t i = 0; i < data_.size(); ++i) {
            data_[i] -= o.data_[i];
        }
        return *this;
    }
    Matrix& operator*=(const T& c)
    {
        for (auto& x : data_) {
            x *= c;
        }
        return *this;
    }
    friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
    friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
    friend Matrix operator*(Matrix a, const T& c) { return a *= c; }
    friend Matrix operator*(const T& c, Matrix a) { return a *= c; }

    bool is_zero() const
    {
        for (const auto& x : data_) {
            if (!Field<T>::is_zero(x)) {
                return false;
            }
        }
        return true;
    }

    /// Equality up to the field's notion of zero.
    friend bool approx_equal(const Matrix& a, const Matrix& b)
    {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && (a - b).is_zero();
    }

    T trace() const
    {
        T out = Field<T>::zero();
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) {
            out += (*this)(i, i);
        }
        return out;
    }

    Matrix transpose() const
    {
        Matrix out(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) {
                out(c, r) = (*this)(r, c);
            }
        }
        return out;
    }

    static Matrix from_json(const nlohmann::json& j)
    {
        if (!j.is_array()) {
            throw std::invalid_argument("matrix must be an array of rows");
        }
        const std::size_t rows = j.size();
        const std::size_t cols = rows == 0 ? 0 : j[0].size();
        Matrix out(rows, cols);
        for (std::size_t r = 0; r < rows; ++r) {
            if (!j[r].is_array() || j[r].size() != cols) {
                throw std::invalid_argument("matrix rows must be arrays of equal length");
            }
            for (std::size_t c = 0; c < cols; ++c) {
                out(r, c) = Field<T>::from_json(j[r][c]);
            }
        }
        return out;
    }

    nlohmann::json to_json() const
    {
        nlohmann::json out = nlohmann::json::array();
        for (std::size_t r = 0; r < rows_; ++r) {
            nlohmann::json row = nlohmann::json::array();
            for (std::size_t c = 0; c < cols_; ++c) {
                row.push_back(Field<T>::to_json((*this)(r, c)));
            }
            out.push_back(row);
        }
        return out;
    }

private:
    void check_same(const Matrix& o) const
    {
        if (rows_ != o.rows_ || cols_ != o.cols_) {
            throw std::invalid_argument("matrix size mismatch");
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

template <typename T>
struct RowEchelon {
    Matrix<T> reduced;
    std::vector<std::size_t> pivots;
};

/// Reduced row echelon form. Float mode pivots on the largest entry.
template <typename T>
RowEchelon<T> rref(Matrix<T> a)
{
    RowEchelon<T> out;
    std::size_t row = 0;
    for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
        std::size_t best = a.rows();
        if constexpr (Field<T>::exact) {
            for (std::size_t r = row; r < a.rows(); ++r) {
                if (!Field<T>::is_zero(a(r, col))) {
                    best = r;
                    break;
                }
            }
        } else {
            double best_mag = Field<T>::tolerance;
            for (std::size_t r = row; r < a.rows(); ++r) {
                if (Field<T>::magnitude(a(r, col)) > best_mag) {
                    best_mag = Field<T>::magnitude(a(r, col));
                    best = r;
                }
            }
        }
        if (best == a.rows()) {
            continue;
        }
        if (best != row) {
            for (std::size_t c = 0; c < a.cols(); ++c) {
                std::swap(a(row, c), a(best, c));
            }
        }
        const T inv = Field<T>::one() / a(row, col);
        for (std::size_t c = col; c < a.cols(); ++c) {
            a(row, c) *= inv;
        }
        for (std::size_t r = 0; r < a.rows(); ++r) {
            if (r == row || Field<T>::is_zero(a(r, col))) {
                continue;
            }
            const T factor = a(r, col);
            for (std::size_t c = col; c < a.cols(); ++c) {
                a(r, c) -= factor * a(row, c);
            }
        }
        out.pivots.push_back(col);
        ++row;
    }
    out.reduced = std::move(a);
    return out;
}

template <typename T>
std::size_t rank(const Matrix<T>& a)
{
    return rref(a).pivots.size();
}

/// Basis of {x : a x = 0}.
template <typename T>
std::vector<Vec<T>> nullspace(const Matrix<T>& a)
{
    const auto e = rref(a);
    std::vector<bool> is_pivot(a.cols(), false);
    for (auto p : e.pivots) {
        is_pivot[p] = true;
    }
    std::vector<Vec<T>> basis;
    for (std::size_t free = 0; free < a.cols(); ++free) {
        if (is_pivot[free]) {
            continue;
        }
        Vec<T> v(a.cols(), Field<T>::zero());
        v[free] = Field<T>::one();
        for (std::size_t i = 0; i < e.pivots.size(); ++i) {
            v[e.pivots[i]] = -e.reduced(i, free);
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

/// One solution of a x = b, or nullopt when the system is inconsistent.
template <typename T>
std::optional<Vec<T>> solve(const Matrix<T>& a, const Vec<T>& b)
{
    Matrix<T> aug(a.rows(), a.cols() + 1);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) {
            aug(r, c) = a(r, c);
        }
        aug(r, a.cols()) = b[r];
    }
    const auto e = rref(aug);
    if (!e.pivots.empty() && e.pivots.back() == a.cols()) {
        return std::nullopt;
    }
    Vec<T> x(a.cols(), Field<T>::zero());
    for (std::size_t i = 0; i < e.pivots.size(); ++i) {
        x[e.pivots[i]] = e.reduced(i, a.cols());
    }
    return x;
}

template <typename T>
std::optional<Matrix<T>> inverse(const Matrix<T>& a)
{
    if (a.rows() != a.cols()) {
        return std::nullopt;
    }
    const std::size_t n = a.rows();
    Matrix<T> aug(n, 2 * n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            aug(r, c) = a(r, c);
        }
        aug(r, n + r) = Field<T>::one();
    }
    const auto e = rref(aug);
    if (e.pivots.size() < n || e.pivots[n - 1] != n - 1) {
        return std::nullopt;
    }
    Matrix<T> out(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            out(r, c) = e.reduced(r, n + c);
        }
    }
    return out;
}

/// Matrix whose columns are the given vectors.
template <typename T>
Matrix<T> from_columns(const std::vector<Vec<T>>& cols, std::size_t rows)
{
    Matrix<T> out(rows, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        for (std::size_t r = 0; r < rows; ++r) {
            out(r, c) = cols[c][r];
        }
    }
    return out;
}

template <typename T>
Vec<T> vec_from_json(const nlohmann::json& j)
{
    if (!j.is_array()) {
        throw std::invalid_argument("expected an array of entries");
    }
    Vec<T> out;
    for (const auto& e : j) {
        out.push_back(Field<T>::from_json(e));
    }
    return out;
}

template <typename T>
nlohmann::json vec_to_json(const Vec<T>& v)
{
    nlohmann::json out = nlohmann::json::array();
    for (const auto& x : v) {
        out.push_back(Field<T>::to_json(x));
    }
    return out;
}

}  // namespace qtrace
