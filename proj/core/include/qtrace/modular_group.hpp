#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace qtrace {

using Complex = std::complex<double>;

class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Integer matrix (alpha beta; gamma delta) with determinant one.
class GroupElement {
public:
    GroupElement() = default;
    /// Throws std::invalid_argument unless alpha*delta - beta*gamma == 1.
    GroupElement(std::int64_t alpha, std::int64_t beta, std::int64_t gamma, std::int64_t delta);

    static GroupElement identity() { return {}; }
    static GroupElement S() { return {0, -1, 1, 0}; }
    static GroupElement T() { return {1, 1, 0, 1}; }
    /// Parses "I", "S", "T", "S^-1", "T^-1" (also "Sinv", "Tinv") or "a,b,c,d".
    static GroupElement parse(const std::string& name);

    std::int64_t alpha() const { return a_; }
    std::int64_t beta() const { return b_; }
    std::int64_t gamma() const { return c_; }
    std::int64_t delta() const { return d_; }

    GroupElement inverse() const { return {d_, -b_, -c_, a_}; }
    friend GroupElement operator*(const GroupElement& x, const GroupElement& y);
    friend bool operator==(const GroupElement& x, const GroupElement& y)
    {
        return x.a_ == y.a_ && x.b_ == y.b_ && x.c_ == y.c_ && x.d_ == y.d_;
    }

    /// gamma tau + delta
    Complex automorphy(Complex tau) const;
    /// (alpha tau + beta) / (gamma tau + delta); throws DomainError outside the upper half-plane.
    Complex act(Complex tau) const;
    /// Principal branch log(gamma tau + delta).
    Complex log_automorphy(Complex tau) const;

    std::string to_string() const;

private:
    std::int64_t a_ = 1;
    std::int64_t b_ = 0;
    std::int64_t c_ = 0;
    std::int64_t d_ = 1;
};

/// Integer w with  log j(g1, g2 tau) + log j(g2, tau) = log j(g1 g2, tau) + 2 pi i w
/// for principal logs; nonzero values mark pairs where the branch choice
/// breaks additivity.
int branch_cocycle(const GroupElement& g1, const GroupElement& g2, Complex tau);

void require_upper_half_plane(Complex tau);

}  // namespace qtrace
