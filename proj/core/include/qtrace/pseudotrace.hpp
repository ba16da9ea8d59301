#pragma once

#include <cstdint>
#include <random>

#include "qtrace/algebra.hpp"
#include "qtrace/report.hpp"

namespace qtrace {

class NotProjective : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

template <typename T>
ProjBasis<T> require_projective_basis(const FDAlgebra<T>& p, const RightModule<T>& mod, const std::string& what)
{
    auto b = find_projective_basis(p, mod);
    if (!b) {
        throw NotProjective(what + " is not a projective right P-module");
    }
    return *b;
}

template <typename T>
T small_random(std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> dist(-3, 3);
    if constexpr (Field<T>::exact) {
        return T(dist(rng));
    } else {
        return T(dist(rng), dist(rng));
    }
}

template <typename T>
Matrix<T> random_combination(const std::vector<Matrix<T>>& basis, std::size_t rows, std::size_t cols,
                             std::mt19937_64& rng)
{
    Matrix<T> out(rows, cols);
    for (const auto& b : basis) {
        out += b * small_random<T>(rng);
    }
    return out;
}

/// Random invertible element of End_P(M); falls back to the identity.
template <typename T>
std::pair<Matrix<T>, Matrix<T>> random_equivariant_automorphism(const RightModule<T>& mod, std::mt19937_64& rng)
{
    const auto ends = equivariant_maps(mod, mod);
    for (int attempt = 0; attempt < 64; ++attempt) {
        Matrix<T> u = random_combination(ends, mod.dim(), mod.dim(), rng);
        if (auto inv = inverse(u)) {
            return {u, *inv};
        }
    }
    return {Matrix<T>::identity(mod.dim()), Matrix<T>::identity(mod.dim())};
}

/// Another projective basis: a random point of the affine solution space,
/// transported by a random equivariant automorphism.
template <typename T>
ProjBasis<T> random_projective_basis(const FDAlgebra<T>& p, const RightModule<T>& mod, std::mt19937_64& rng)
{
    const auto sys = projective_system(p, mod);
    auto x = solve(sys.lhs, sys.rhs);
    if (!x) {
        throw NotProjective("module is not a projective right P-module");
    }
    for (const auto& v : nullspace(sys.lhs)) {
        const T c = small_random<T>(rng);
        for (std::size_t i = 0; i < v.size(); ++i) {
            (*x)[i] += c * v[i];
        }
    }
    const auto [u, u_inv] = random_equivariant_automorphism(mod, rng);
    return transport_basis(sys.basis_from(*x, mod.dim()), u, u_inv);
}

template <typename T>
double deviation(const T& a, const T& b)
{
    return Field<T>::magnitude(a - b);
}

/// Pseudotrace of `op` under `trials` randomized projective bases; all values must agree.
/// A supplied starting basis is certified first and the check fails without
/// comparing values when it is not a projective basis.
template <typename T>
CheckReport basis_independence_check(const FDAlgebra<T>& p, const RightModule<T>& mod, const SymFn<T>& phi,
                                     const Matrix<T>& op, int trials, std::uint64_t seed,
                                     const std::optional<ProjBasis<T>>& start = std::nullopt)
{
    CheckReport report;
    report.id = "pseudotrace_basis_independence";
    report.tolerance = Field<T>::exact ? 0.0 : 1e-10;
    mod.require_equivariant(op, "operator");
    ProjBasis<T> base;
    if (start) {
        if (auto defect = projective_basis_defect(p, mod, *start)) {
            report.pass = false;
            report.notes.push_back("supplied projective basis rejected: " + *defect);
            return report;
        }
        base = *start;
    } else {
        base = require_projective_basis(p, mod, "module");
    }
    std::mt19937_64 rng(seed);
    const T reference = pseudotrace(p, mod, phi, base, op);
    nlohmann::json values = nlohmann::json::array({Field<T>::to_json(reference)});
    for (int t = 0; t < trials; ++t) {
        const ProjBasis<T> b = random_projective_basis(p, mod, rng);
        if (auto defect = projective_basis_defect(p, mod, b)) {
            throw std::logic_error("randomized basis failed certification: " + *defect);
        }
        const T value = pseudotrace(p, mod, phi, b, op);
        values.push_back(Field<T>::to_json(value));
        report.max_deviation = std::max(report.max_deviation, deviation(value, reference));
        if (!Field<T>::is_zero(value - reference)) {
            report.pass = false;
        }
    }
    report.details = {{"trials", trials}, {"seed", seed}, {"values", values}};
    return report;
}

/// phi_{M1}(beta o alpha) against phi_{M2}(alpha o beta) for alpha: M1 -> M2, beta: M2 -> M1.
template <typename T>
CheckReport cyclicity_check(const FDAlgebra<T>& p, const SymFn<T>& phi, const RightModule<T>& m1,
                            const RightModule<T>& m2, const Matrix<T>& alpha, const Matrix<T>& beta)
{
    auto require_hom = [&](const Matrix<T>& h, const RightModule<T>& from, const RightModule<T>& to, const char* name) {
        if (h.rows() != to.dim() || h.cols() != from.dim()) {
            throw std::invalid_argument(std::string(name) + " has the wrong shape");
        }
        for (std::size_t k = 0; k < from.action().size(); ++k) {
            if (!approx_equal(h * from.action()[k], to.action()[k] * h)) {
                throw NotEquivariant(name, k);
            }
        }
    };
    require_hom(alpha, m1, m2, "alpha");
    require_hom(beta, m2, m1, "beta");
    const T lhs = pseudotrace(p, m1, phi, require_projective_basis(p, m1, "M1"), beta * alpha);
    const T rhs = pseudotrace(p, m2, phi, require_projective_basis(p, m2, "M2"), alpha * beta);
    CheckReport report;
    report.id = "pseudotrace_cyclicity";
    report.tolerance = Field<T>::exact ? 0.0 : 1e-10;
    report.max_deviation = deviation(lhs, rhs);
    report.pass = Field<T>::is_zero(lhs - rhs);
    report.details = {{"lhs", Field<T>::to_json(lhs)}, {"rhs", Field<T>::to_json(rhs)}};
    return report;
}

/// Direct sum of right modules over the same algebra.
template <typename T>
RightModule<T> direct_sum(const FDAlgebra<T>& p, const RightModule<T>& a, const RightModule<T>& b)
{
    std::vector<Matrix<T>> action;
    const std::size_t n = a.dim() + b.dim();
    for (std::size_t k = 0; k < p.dim(); ++k) {
        Matrix<T> m(n, n);
        for (std::size_t i = 0; i < a.dim(); ++i) {
            for (std::size_t j = 0; j < a.dim(); ++j) {
                m(i, j) = a.action()[k](i, j);
            }
        }
        for (std::size_t i = 0; i < b.dim(); ++i) {
            for (std::size_t j = 0; j < b.dim(); ++j) {
                m(a.dim() + i, a.dim() + j) = b.action()[k](i, j);
            }
        }
        action.push_back(std::move(m));
    }
    return RightModule<T>(p, std::move(action));
}

}  // namespace qtrace
