#pragma once

#include <algorithm>
#include <complex>
#include <map>
#include <utility>

#include "qtrace/log_series.hpp"
#include "qtrace/pseudotrace.hpp"
#include "qtrace/series.hpp"

namespace qtrace {

/// Eigenvalues of the n x n row-major matrix, each rounded to the nearest
/// rational with denominator <= max_den. Throws std::invalid_argument when an
/// eigenvalue is not real or not within 1e-6 of such a rational.
std::vector<Rational> rational_eigenvalue_candidates(const std::vector<std::complex<double>>& row_major, std::size_t n,
                                                     int max_den = SeriesDefaults::max_denominator);

template <typename T>
Scalar to_scalar(const T& x)
{
    if constexpr (Field<T>::exact) {
        return Scalar(x);
    } else {
        return Scalar(Complex(x));
    }
}

template <typename T>
std::complex<double> to_complex_value(const T& x)
{
    if constexpr (Field<T>::exact) {
        return {to_double(x), 0.0};
    } else {
        return x;
    }
}

/// Finite-dimensional module W with grading operator L(0) = S + N: S
/// diagonalizable with rational eigenvalues, N nilpotent, [S, N] = 0, and a
/// right P-action commuting with both.
template <typename T>
class GradedSpace {
public:
    struct Eigenspace {
        Rational weight;
        Matrix<T> basis;  // columns span W_[weight]
    };

    GradedSpace(FDAlgebra<T> algebra, RightModule<T> module, Matrix<T> s, Matrix<T> n)
        : algebra_(std::move(algebra)), module_(std::move(module)), s_(std::move(s)), n_(std::move(n))
    {
        const std::size_t d = module_.dim();
        if (s_.rows() != d || s_.cols() != d || n_.rows() != d || n_.cols() != d) {
            throw std::invalid_argument("S and N must be square of the module dimension");
        }
        if (!approx_equal(s_ * n_, n_ * s_)) {
            throw std::invalid_argument("S and N do not commute");
        }
        Matrix<T> power = Matrix<T>::identity(d);
        nilpotency_ = 0;
        while (!power.is_zero()) {
            if (nilpotency_ > static_cast<int>(d)) {
                throw std::invalid_argument("N is not nilpotent");
            }
            power = power * n_;
            ++nilpotency_;
        }
        if (auto k = module_.equivariance_failure(s_)) {
            throw NotEquivariant("S", *k);
        }
        if (auto k = module_.equivariance_failure(n_)) {
            throw NotEquivariant("N", *k);
        }
        decompose();
    }

    /// Module JSON plus "S" and optional "N" (zero by default). Without
    /// "action" the algebra must be one-dimensional and acts by scalars.
    static GradedSpace from_json(const FDAlgebra<T>& algebra, const nlohmann::json& j)
    {
        Matrix<T> s = Matrix<T>::from_json(j.at("S"));
        std::optional<RightModule<T>> module;
        if (j.contains("action")) {
            module = RightModule<T>::from_json(algebra, j);
        } else {
            if (algebra.dim() != 1) {
                throw std::invalid_argument("graded space needs \"action\" for a non-trivial algebra");
            }
            module = RightModule<T>(algebra, {Matrix<T>::identity(s.rows()) * algebra.unit()[0]});
        }
        Matrix<T> n = j.contains("N") ? Matrix<T>::from_json(j.at("N")) : Matrix<T>(s.rows(), s.cols());
        return GradedSpace(algebra, std::move(*module), std::move(s), std::move(n));
    }

    const FDAlgebra<T>& algebra() const { return algebra_; }
    const RightModule<T>& module() const { return module_; }
    const Matrix<T>& S() const { return s_; }
    const Matrix<T>& N() const { return n_; }
    std::size_t dim() const { return module_.dim(); }
    /// Smallest k with N^k = 0.
    int nilpotency_index() const { return nilpotency_; }
    const std::vector<Eigenspace>& eigenspaces() const { return spaces_; }

    /// pi_n op restricted to W_[n], in the coordinates of eigenspaces()[idx].basis.
    Matrix<T> restrict(const Matrix<T>& op, std::size_t idx) const
    {
        const Matrix<T> full = coords_ * (op * spaces_.at(idx).basis);
        const std::size_t width = spaces_[idx].basis.cols();
        Matrix<T> out(width, width);
        for (std::size_t r = 0; r < width; ++r) {
            for (std::size_t c = 0; c < width; ++c) {
                out(r, c) = full(offsets_[idx] + r, c);
            }
        }
        return out;
    }

    RightModule<T> restricted_module(std::size_t idx) const
    {
        std::vector<Matrix<T>> action;
        for (const auto& a : module_.action()) {
            action.push_back(restrict(a, idx));
        }
        return RightModule<T>(algebra_, std::move(action));
    }

    /// Spectral projector onto W_[weight of idx] along the other eigenspaces.
    Matrix<T> projector(std::size_t idx) const
    {
        Matrix<T> select(dim(), dim());
        for (std::size_t i = 0; i < spaces_.at(idx).basis.cols(); ++i) {
            select(offsets_[idx] + i, offsets_[idx] + i) = Field<T>::one();
        }
        return eigenbasis_ * select * coords_;
    }

private:
    void decompose()
    {
        const std::size_t d = dim();
        std::vector<std::complex<double>> numeric(d * d);
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t c = 0; c < d; ++c) {
                numeric[r * d + c] = to_complex_value(s_(r, c));
            }
        }
        std::vector<Rational> weights = rational_eigenvalue_candidates(numeric, d);
        std::sort(weights.begin(), weights.end());
        std::vector<Vec<T>> all;
        for (const auto& w : weights) {
            Matrix<T> shifted = s_;
            for (std::size_t i = 0; i < d; ++i) {
                if constexpr (Field<T>::exact) {
                    shifted(i, i) -= w;
                } else {
                    shifted(i, i) -= T(to_double(w), 0.0);
                }
            }
            auto kernel = nullspace(shifted);
            if (kernel.empty()) {
                continue;
            }
            offsets_.push_back(all.size());
            spaces_.push_back({w, from_columns(kernel, d)});
            all.insert(all.end(), kernel.begin(), kernel.end());
        }
        if (all.size() != d) {
            throw std::invalid_argument("S is not diagonalizable with rational eigenvalues");
        }
        eigenbasis_ = from_columns(all, d);
        auto inv = inverse(eigenbasis_);
        if (!inv) {
            throw std::invalid_argument("S eigenvectors do not form a basis");
        }
        coords_ = *inv;
    }

    FDAlgebra<T> algebra_;
    RightModule<T> module_;
    Matrix<T> s_;
    Matrix<T> n_;
    int nilpotency_ = 0;
    std::vector<Eigenspace> spaces_;
    std::vector<std::size_t> offsets_;
    Matrix<T> eigenbasis_;
    Matrix<T> coords_;
};

/// sum over (e, l) of M_{e,l} x^e (log x)^l with matrix coefficients.
template <typename T>
struct OperatorLogSeries {
    using Key = std::pair<Rational, int>;
    std::size_t dim = 0;
    std::map<Key, Matrix<T>> terms;

    void add(const Rational& e, int l, const Matrix<T>& m)
    {
        auto [it, inserted] = terms.try_emplace({e, l}, m);
        if (!inserted) {
            it->second += m;
        }
        if (it->second.is_zero()) {
            terms.erase(it);
        }
    }

    OperatorLogSeries derivative() const
    {
        OperatorLogSeries out{dim, {}};
        for (const auto& [key, m] : terms) {
            const auto& [e, l] = key;
            if (e != 0) {
                if constexpr (Field<T>::exact) {
                    out.add(e - 1, l, m * e);
                } else {
                    out.add(e - 1, l, m * T(to_double(e), 0.0));
                }
            }
            if (l > 0) {
                out.add(e - 1, l - 1, m * T(l));
            }
        }
        return out;
    }

    OperatorLogSeries left_multiplied(const Matrix<T>& a) const
    {
        OperatorLogSeries out{dim, {}};
        for (const auto& [key, m] : terms) {
            out.add(key.first, key.second, a * m);
        }
        return out;
    }

    OperatorLogSeries shifted(const Rational& by) const
    {
        OperatorLogSeries out{dim, {}};
        for (const auto& [key, m] : terms) {
            out.add(key.first + by, key.second, m);
        }
        return out;
    }

    friend bool approx_equal(const OperatorLogSeries& a, const OperatorLogSeries& b)
    {
        if (a.terms.size() != b.terms.size()) {
            return false;
        }
        for (const auto& [key, m] : a.terms) {
            auto it = b.terms.find(key);
            if (it == b.terms.end() || !approx_equal(m, it->second)) {
                return false;
            }
        }
        return true;
    }

    /// Matrix entry (r, c) as a series in x with log x.
    LogSeries entry(std::size_t r, std::size_t c, const std::string& var = "x") const
    {
        LogSeries out(var, Field<T>::exact ? Scalar::Kind::exact : Scalar::Kind::numeric);
        int max_l = 0;
        for (const auto& [key, m] : terms) {
            max_l = std::max(max_l, key.second);
        }
        out.set_max_logpower(std::max(max_l, SeriesDefaults::max_logpower));
        for (const auto& [key, m] : terms) {
            if (!Field<T>::is_zero(m(r, c))) {
                out.add_term(key.first, key.second, to_scalar(m(r, c)));
            }
        }
        return out;
    }

    nlohmann::json to_json() const
    {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& [key, m] : terms) {
            out.push_back({{"exp", qtrace::to_string(key.first)}, {"log", key.second}, {"matrix", m.to_json()}});
        }
        return out;
    }
};

/// x^{L(0)} = sum_n P_n x^n sum_j N^j / j! (log x)^j over the eigenvalues n of S.
template <typename T>
OperatorLogSeries<T> x_pow_L0(const GradedSpace<T>& w)
{
    OperatorLogSeries<T> out{w.dim(), {}};
    for (std::size_t idx = 0; idx < w.eigenspaces().size(); ++idx) {
        const Matrix<T> proj = w.projector(idx);
        Matrix<T> power = Matrix<T>::identity(w.dim());
        T fact = Field<T>::one();
        for (int j = 0; !power.is_zero(); ++j) {
            if (j > 0) {
                fact *= T(j);
            }
            out.add(w.eigenspaces()[idx].weight, j, proj * power * (Field<T>::one() / fact));
            power = power * w.N();
        }
    }
    return out;
}

/// d/dx x^{L(0)} == L(0) x^{L(0) - 1} as matrix-valued series.
template <typename T>
bool x_pow_L0_derivative_law(const GradedSpace<T>& w)
{
    const auto x = x_pow_L0(w);
    return approx_equal(x.derivative(), x.left_multiplied(w.S() + w.N()).shifted(-1));
}

/// sum_n sum_j phi_{W_[n]}(pi_n a N^j / j!) q^n (log q)^j.
template <typename T>
MultiSeries formal_q_pseudotrace(const GradedSpace<T>& w, const SymFn<T>& phi, const Matrix<T>& a)
{
    w.module().require_equivariant(a, "operator a");
    MultiSeries out({"q"}, Field<T>::exact ? Scalar::Kind::exact : Scalar::Kind::numeric);
    out.set_max_logpower(std::max(w.nilpotency_index(), SeriesDefaults::max_logpower));
    for (std::size_t idx = 0; idx < w.eigenspaces().size(); ++idx) {
        const Rational& weight = w.eigenspaces()[idx].weight;
        const RightModule<T> mod = w.restricted_module(idx);
        const ProjBasis<T> basis =
            require_projective_basis(w.algebra(), mod, "eigenspace W_[" + qtrace::to_string(weight) + "]");
        const Matrix<T> a_n = w.restrict(a, idx);
        const Matrix<T> n_n = w.restrict(w.N(), idx);
        Matrix<T> power = Matrix<T>::identity(mod.dim());
        T fact = Field<T>::one();
        for (int j = 0; !power.is_zero(); ++j) {
            if (j > 0) {
                fact *= T(j);
            }
            const T c = pseudotrace(w.algebra(), mod, phi, basis, a_n * power * (Field<T>::one() / fact));
            if (!Field<T>::is_zero(c)) {
                out.add_term(mono(weight, j), to_scalar(c));
            }
            power = power * n_n;
        }
    }
    return out;
}

}  // namespace qtrace
