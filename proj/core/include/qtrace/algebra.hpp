#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qtrace/linalg.hpp"

namespace qtrace {

/// Operator fails to commute with the action of basis element `basis_index`.
class NotEquivariant : public std::invalid_argument {
public:
    NotEquivariant(const std::string& what, std::size_t basis_index)
        : std::invalid_argument(what + ": not P-equivariant, fails on basis element e_" + std::to_string(basis_index)),
          basis_index_(basis_index)
    {
    }
    std::size_t basis_index() const { return basis_index_; }

private:
    std::size_t basis_index_;
};

/// Associative unital algebra with basis e_0..e_{d-1} and e_i e_j = sum_k c[i][j][k] e_k.
template <typename T>
class FDAlgebra {
public:
    /// Validates associativity and the unit laws; throws std::invalid_argument.
    FDAlgebra(std::size_t dim, std::vector<T> structure, Vec<T> unit)
        : dim_(dim), c_(std::move(structure)), unit_(std::move(unit))
    {
        if (c_.size() != dim_ * dim_ * dim_ || unit_.size() != dim_) {
            throw std::invalid_argument("algebra data has inconsistent dimensions");
        }
        for (std::size_t i = 0; i < dim_; ++i) {
            const Vec<T> ei = basis(i);
            if (!same(multiply(unit_, ei), ei) || !same(multiply(ei, unit_), ei)) {
                throw std::invalid_argument("unit law fails on e_" + std::to_string(i));
            }
            for (std::size_t j = 0; j < dim_; ++j) {
                for (std::size_t k = 0; k < dim_; ++k) {
                    const Vec<T> lhs = multiply(multiply(ei, basis(j)), basis(k));
                    const Vec<T> rhs = multiply(ei, multiply(basis(j), basis(k)));
                    if (!same(lhs, rhs)) {
                        throw std::invalid_argument("associativity fails on (e_" + std::to_string(i) + ", e_" +
                                                    std::to_string(j) + ", e_" + std::to_string(k) + ")");
                    }
                }
            }
        }
    }

    static FDAlgebra scalars() { return FDAlgebra(1, {Field<T>::one()}, {Field<T>::one()}); }

    /// n x n matrices with basis E_{ab} at index a n + b.
    static FDAlgebra matrices(std::size_t n)
    {
        const std::size_t d = n * n;
        std::vector<T> c(d * d * d, Field<T>::zero());
        for (std::size_t a = 0; a < n; ++a) {
            for (std::size_t b = 0; b < n; ++b) {
                for (std::size_t e = 0; e < n; ++e) {
                    // E_ab E_be = E_ae
                    c[((a * n + b) * d + (b * n + e)) * d + (a * n + e)] = Field<T>::one();
                }
            }
        }
        Vec<T> unit(d, Field<T>::zero());
        for (std::size_t a = 0; a < n; ++a) {
            unit[a * n + a] = Field<T>::one();
        }
        return FDAlgebra(d, std::move(c), std::move(unit));
    }

    /// C[eps]/(eps^2) with basis (1, eps).
    static FDAlgebra dual_numbers()
    {
        std::vector<T> c(8, Field<T>::zero());
        c[(0 * 2 + 0) * 2 + 0] = Field<T>::one();
        c[(0 * 2 + 1) * 2 + 1] = Field<T>::one();
        c[(1 * 2 + 0) * 2 + 1] = Field<T>::one();
        return FDAlgebra(2, std::move(c), {Field<T>::one(), Field<T>::zero()});
    }

    /// {"dim": d, "mul": c[i][j][k], "unit": [...]}
    static FDAlgebra from_json(const nlohmann::json& j)
    {
        const std::size_t d = j.at("dim").get<std::size_t>();
        const auto& mul = j.at("mul");
        if (!mul.is_array() || mul.size() != d) {
            throw std::invalid_argument("\"mul\" must be a dim x dim x dim array");
        }
        std::vector<T> c;
        c.reserve(d * d * d);
        for (const auto& row : mul) {
            if (!row.is_array() || row.size() != d) {
                throw std::invalid_argument("\"mul\" must be a dim x dim x dim array");
            }
            for (const auto& entry : row) {
                Vec<T> v = vec_from_json<T>(entry);
                if (v.size() != d) {
                    throw std::invalid_argument("\"mul\" must be a dim x dim x dim array");
                }
                c.insert(c.end(), v.begin(), v.end());
            }
        }
        return FDAlgebra(d, std::move(c), vec_from_json<T>(j.at("unit")));
    }

    nlohmann::json to_json() const
    {
        nlohmann::json mul = nlohmann::json::array();
        for (std::size_t i = 0; i < dim_; ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (std::size_t j = 0; j < dim_; ++j) {
                row.push_back(vec_to_json(product_coords(i, j)));
            }
            mul.push_back(row);
        }
        return {{"dim", dim_}, {"mul", mul}, {"unit", vec_to_json(unit_)}};
    }

    std::size_t dim() const { return dim_; }
    const Vec<T>& unit() const { return unit_; }
    const T& c(std::size_t i, std::size_t j, std::size_t k) const { return c_[(i * dim_ + j) * dim_ + k]; }

    Vec<T> basis(std::size_t i) const
    {
        Vec<T> v(dim_, Field<T>::zero());
        v.at(i) = Field<T>::one();
        return v;
    }

    Vec<T> multiply(const Vec<T>& a, const Vec<T>& b) const
    {
        Vec<T> out(dim_, Field<T>::zero());
        for (std::size_t i = 0; i < dim_; ++i) {
            if (Field<T>::is_zero(a[i])) {
                continue;
            }
            for (std::size_t j = 0; j < dim_; ++j) {
                if (Field<T>::is_zero(b[j])) {
                    continue;
                }
                const T ab = a[i] * b[j];
                for (std::size_t k = 0; k < dim_; ++k) {
                    out[k] += ab * c(i, j, k);
                }
            }
        }
        return out;
    }

    /// Matrix of p -> p e_k on coordinate vectors.
    Matrix<T> right_mult(std::size_t k) const
    {
        Matrix<T> r(dim_, dim_);
        for (std::size_t a = 0; a < dim_; ++a) {
            for (std::size_t out = 0; out < dim_; ++out) {
                r(out, a) = c(a, k, out);
            }
        }
        return r;
    }

    static bool same(const Vec<T>& a, const Vec<T>& b)
    {
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (!Field<T>::is_zero(a[i] - b[i])) {
                return false;
            }
        }
        return a.size() == b.size();
    }

private:
    Vec<T> product_coords(std::size_t i, std::size_t j) const
    {
        Vec<T> v(dim_);
        for (std::size_t k = 0; k < dim_; ++k) {
            v[k] = c(i, j, k);
        }
        return v;
    }

    std::size_t dim_;
    std::vector<T> c_;
    Vec<T> unit_;
};

/// Right P-module on column vectors: v . e_k = action[k] v, so
/// v . (e_i e_j) = action[j] action[i] v.
template <typename T>
class RightModule {
public:
    RightModule(const FDAlgebra<T>& algebra, std::vector<Matrix<T>> action) : action_(std::move(action))
    {
        if (action_.size() != algebra.dim()) {
            throw std::invalid_argument("module needs one action matrix per algebra basis element");
        }
        dim_ = action_.empty() ? 0 : action_[0].rows();
        for (const auto& a : action_) {
            if (a.rows() != dim_ || a.cols() != dim_) {
                throw std::invalid_argument("action matrices must be square of the module dimension");
            }
        }
        if (!approx_equal(act(algebra.unit()), Matrix<T>::identity(dim_))) {
            throw std::invalid_argument("the unit does not act as the identity");
        }
        for (std::size_t i = 0; i < algebra.dim(); ++i) {
            for (std::size_t j = 0; j < algebra.dim(); ++j) {
                Vec<T> coeffs(algebra.dim());
                for (std::size_t k = 0; k < algebra.dim(); ++k) {
                    coeffs[k] = algebra.c(i, j, k);
                }
                if (!approx_equal(act(coeffs), action_[j] * action_[i])) {
                    throw std::invalid_argument("action is not a right action on (e_" + std::to_string(i) + ", e_" +
                                                std::to_string(j) + ")");
                }
            }
        }
    }

    /// P acting on itself by right multiplication.
    static RightModule regular(const FDAlgebra<T>& algebra)
    {
        std::vector<Matrix<T>> action;
        for (std::size_t k = 0; k < algebra.dim(); ++k) {
            action.push_back(algebra.right_mult(k));
        }
        return RightModule(algebra, std::move(action));
    }

    /// {"dim": m, "action": [matrix per algebra basis element]}
    static RightModule from_json(const FDAlgebra<T>& algebra, const nlohmann::json& j)
    {
        std::vector<Matrix<T>> action;
        for (const auto& m : j.at("action")) {
            action.push_back(Matrix<T>::from_json(m));
        }
        RightModule out(algebra, std::move(action));
        if (j.contains("dim") && j.at("dim").get<std::size_t>() != out.dim()) {
            throw std::invalid_argument("module \"dim\" disagrees with its action matrices");
        }
        return out;
    }

    nlohmann::json to_json() const
    {
        nlohmann::json action = nlohmann::json::array();
        for (const auto& a : action_) {
            action.push_back(a.to_json());
        }
        return {{"dim", dim_}, {"action", action}};
    }

    std::size_t dim() const { return dim_; }
    const std::vector<Matrix<T>>& action() const { return action_; }

    Matrix<T> act(const Vec<T>& p) const
    {
        Matrix<T> out(dim_, dim_);
        for (std::size_t k = 0; k < action_.size(); ++k) {
            if (!Field<T>::is_zero(p[k])) {
                out += action_[k] * p[k];
            }
        }
        return out;
    }

    /// Index of the first basis element whose action fails to commute with t.
    std::optional<std::size_t> equivariance_failure(const Matrix<T>& t) const
    {
        for (std::size_t k = 0; k < action_.size(); ++k) {
            if (!approx_equal(t * action_[k], action_[k] * t)) {
                return k;
            }
        }
        return std::nullopt;
    }

    void require_equivariant(const Matrix<T>& t, const std::string& what) const
    {
        if (t.rows() != dim_ || t.cols() != dim_) {
            throw std::invalid_argument(what + ": expected a " + std::to_string(dim_) + "x" + std::to_string(dim_) +
                                        " matrix");
        }
        if (auto k = equivariance_failure(t)) {
            throw NotEquivariant(what, *k);
        }
    }

private:
    std::size_t dim_ = 0;
    std::vector<Matrix<T>> action_;
};

/// Basis of Hom_P(M1, M2): matrices h (dim M2 x dim M1) with h A1_k = A2_k h.
template <typename T>
std::vector<Matrix<T>> equivariant_maps(const RightModule<T>& m1, const RightModule<T>& m2)
{
    const std::size_t r = m2.dim();
    const std::size_t c = m1.dim();
    const std::size_t nk = m1.action().size();
    Matrix<T> sys(nk * r * c, r * c);
    for (std::size_t k = 0; k < nk; ++k) {
        const auto& a1 = m1.action()[k];
        const auto& a2 = m2.action()[k];
        for (std::size_t i = 0; i < r; ++i) {
            for (std::size_t j = 0; j < c; ++j) {
                const std::size_t eq = (k * r + i) * c + j;
                // (h a1)_{ij} - (a2 h)_{ij}
                for (std::size_t l = 0; l < c; ++l) {
                    sys(eq, i * c + l) += a1(l, j);
                }
                for (std::size_t l = 0; l < r; ++l) {
                    sys(eq, l * c + j) -= a2(i, l);
                }
            }
        }
    }
    std::vector<Matrix<T>> out;
    for (const auto& v : nullspace(sys)) {
        Matrix<T> h(r, c);
        for (std::size_t i = 0; i < r; ++i) {
            for (std::size_t j = 0; j < c; ++j) {
                h(i, j) = v[i * c + j];
            }
        }
        out.push_back(std::move(h));
    }
    return out;
}

/// Symmetric linear function on P given by its values on the basis.
template <typename T>
struct SymFn {
    Vec<T> phi;

    T operator()(const Vec<T>& p) const
    {
        T out = Field<T>::zero();
        for (std::size_t i = 0; i < phi.size(); ++i) {
            out += phi[i] * p[i];
        }
        return out;
    }

    /// {"phi": [...]} or a bare array.
    static SymFn from_json(const nlohmann::json& j) { return {vec_from_json<T>(j.is_object() ? j.at("phi") : j)}; }
};

template <typename T>
bool check_symmetric(const FDAlgebra<T>& p, const SymFn<T>& phi)
{
    if (phi.phi.size() != p.dim()) {
        throw std::invalid_argument("functional and algebra dimensions differ");
    }
    for (std::size_t i = 0; i < p.dim(); ++i) {
        for (std::size_t j = i + 1; j < p.dim(); ++j) {
            const T lhs = phi(p.multiply(p.basis(i), p.basis(j)));
            const T rhs = phi(p.multiply(p.basis(j), p.basis(i)));
            if (!Field<T>::is_zero(lhs - rhs)) {
                return false;
            }
        }
    }
    return true;
}

/// Elements m_i of M and P-linear alpha_i: M -> P (dim P x dim M matrices)
/// with m = sum_i m_i . alpha_i(m).
template <typename T>
struct ProjBasis {
    std::vector<Vec<T>> m;
    std::vector<Matrix<T>> alpha;
};

/// Empty when both invariants hold, otherwise a description of the first failure.
template <typename T>
std::optional<std::string> projective_basis_defect(const FDAlgebra<T>& p, const RightModule<T>& mod,
                                                   const ProjBasis<T>& b)
{
    if (b.m.size() != b.alpha.size()) {
        return "element and functional counts differ";
    }
    for (std::size_t i = 0; i < b.alpha.size(); ++i) {
        const auto& a = b.alpha[i];
        if (a.rows() != p.dim() || a.cols() != mod.dim() || b.m[i].size() != mod.dim()) {
            return "alpha_" + std::to_string(i) + " has the wrong shape";
        }
        for (std::size_t k = 0; k < p.dim(); ++k) {
            if (!approx_equal(a * mod.action()[k], p.right_mult(k) * a)) {
                return "alpha_" + std::to_string(i) + " is not P-linear on e_" + std::to_string(k);
            }
        }
    }
    for (std::size_t col = 0; col < mod.dim(); ++col) {
        Vec<T> e(mod.dim(), Field<T>::zero());
        e[col] = Field<T>::one();
        Vec<T> sum(mod.dim(), Field<T>::zero());
        for (std::size_t i = 0; i < b.m.size(); ++i) {
            const Vec<T> mi_p = mod.act(b.alpha[i] * e) * b.m[i];
            for (std::size_t r = 0; r < mod.dim(); ++r) {
                sum[r] += mi_p[r];
            }
        }
        if (!FDAlgebra<T>::same(sum, e)) {
            return "reproducing identity fails on module basis vector " + std::to_string(col);
        }
    }
    return std::nullopt;
}

/// Linear data of the projective-basis problem with m_i fixed to the module
/// basis: alpha_i = sum_t x_{i,t} h_t over a basis h_t of Hom_P(M, P).
template <typename T>
struct ProjectiveSystem {
    std::vector<Matrix<T>> hom;
    Matrix<T> lhs;
    Vec<T> rhs;

    ProjBasis<T> basis_from(const Vec<T>& x, std::size_t dim) const
    {
        ProjBasis<T> b;
        for (std::size_t i = 0; i < dim; ++i) {
            Vec<T> e(dim, Field<T>::zero());
            e[i] = Field<T>::one();
            b.m.push_back(e);
            Matrix<T> a(hom.empty() ? 0 : hom[0].rows(), dim);
            for (std::size_t t = 0; t < hom.size(); ++t) {
                if (!Field<T>::is_zero(x[i * hom.size() + t])) {
                    a += hom[t] * x[i * hom.size() + t];
                }
            }
            b.alpha.push_back(std::move(a));
        }
        return b;
    }
};

template <typename T>
ProjectiveSystem<T> projective_system(const FDAlgebra<T>& p, const RightModule<T>& mod)
{
    ProjectiveSystem<T> sys;
    sys.hom = equivariant_maps(mod, RightModule<T>::regular(p));
    const std::size_t d = mod.dim();
    const std::size_t nh = sys.hom.size();
    // sum_i sum_t x_{i,t} sum_a h_t[a][b] A_a e_i = e_b, one equation per (row, b)
    sys.lhs = Matrix<T>(d * d, d * nh);
    sys.rhs = Vec<T>(d * d, Field<T>::zero());
    for (std::size_t b = 0; b < d; ++b) {
        sys.rhs[b * d + b] = Field<T>::one();
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t t = 0; t < nh; ++t) {
                for (std::size_t a = 0; a < p.dim(); ++a) {
                    const T& h = sys.hom[t](a, b);
                    if (Field<T>::is_zero(h)) {
                        continue;
                    }
                    for (std::size_t row = 0; row < d; ++row) {
                        sys.lhs(b * d + row, i * nh + t) += h * mod.action()[a](row, i);
                    }
                }
            }
        }
    }
    return sys;
}

/// A certified projective basis, or nullopt when M is not projective.
template <typename T>
std::optional<ProjBasis<T>> find_projective_basis(const FDAlgebra<T>& p, const RightModule<T>& mod)
{
    const auto sys = projective_system(p, mod);
    if (mod.dim() == 0) {
        return ProjBasis<T>{};
    }
    const auto x = solve(sys.lhs, sys.rhs);
    if (!x) {
        return std::nullopt;
    }
    ProjBasis<T> b = sys.basis_from(*x, mod.dim());
    if (auto defect = projective_basis_defect(p, mod, b)) {
        throw std::logic_error("projective basis failed certification: " + *defect);
    }
    return b;
}

/// phi(sum_i alpha_i(T m_i)).
template <typename T>
T pseudotrace(const FDAlgebra<T>& p, const RightModule<T>& mod, const SymFn<T>& phi, const ProjBasis<T>& b,
              const Matrix<T>& op)
{
    mod.require_equivariant(op, "operator");
    Vec<T> sum(p.dim(), Field<T>::zero());
    for (std::size_t i = 0; i < b.m.size(); ++i) {
        const Vec<T> v = b.alpha[i] * (op * b.m[i]);
        for (std::size_t k = 0; k < p.dim(); ++k) {
            sum[k] += v[k];
        }
    }
    return phi(sum);
}

/// Projective basis transported by an invertible equivariant u:
/// m'_i = u m_i, alpha'_i = alpha_i u^{-1}.
template <typename T>
ProjBasis<T> transport_basis(const ProjBasis<T>& b, const Matrix<T>& u, const Matrix<T>& u_inv)
{
    ProjBasis<T> out;
    for (std::size_t i = 0; i < b.m.size(); ++i) {
        out.m.push_back(u * b.m[i]);
        out.alpha.push_back(b.alpha[i] * u_inv);
    }
    return out;
}

}  // namespace qtrace
