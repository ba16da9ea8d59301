#include "qtrace/graded.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace qtrace {

namespace {

Rational nearest_rational(double x, int max_den)
{
    Rational best;
    double best_err = INFINITY;
    for (int den = 1; den <= max_den; ++den) {
        const double num = std::round(x * den);
        const double err = std::abs(x - num / den);
        if (err < best_err - 1e-12) {
            best_err = err;
            best = Rational(static_cast<long>(num), den);
        }
    }
    if (best_err > 1e-6) {
        throw std::invalid_argument("eigenvalue " + std::to_string(x) +
                                    " of S is not a rational with denominator <= " + std::to_string(max_den));
    }
    best.canonicalize();
    return best;
}

}  // namespace

std::vector<Rational> rational_eigenvalue_candidates(const std::vector<std::complex<double>>& row_major, std::size_t n,
                                                     int max_den)
{
    if (row_major.size() != n * n) {
        throw std::invalid_argument("eigenvalue input has the wrong size");
    }
    if (n == 0) {
        return {};
    }
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row_major[r * n + c];
        }
    }
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
    if (solver.info() != Eigen::Success) {
        throw std::invalid_argument("eigenvalue computation for S did not converge");
    }
    std::vector<Rational> out;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
        const auto ev = solver.eigenvalues()[i];
        if (std::abs(ev.imag()) > 1e-6) {
            throw std::invalid_argument("S has a non-real eigenvalue");
        }
        const Rational r = nearest_rational(ev.real(), max_den);
        if (std::find(out.begin(), out.end(), r) == out.end()) {
            out.push_back(r);
        }
    }
    return out;
}

}  // namespace qtrace
