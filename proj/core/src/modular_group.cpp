#include "qtrace/modular_group.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace qtrace {

GroupElement::GroupElement(std::int64_t alpha, std::int64_t beta, std::int64_t gamma, std::int64_t delta)
    : a_(alpha), b_(beta), c_(gamma), d_(delta)
{
    if (a_ * d_ - b_ * c_ != 1) {
        throw std::invalid_argument("matrix " + to_string() + " is not in SL2(Z)");
    }
}

GroupElement GroupElement::parse(const std::string& name)
{
    if (name == "I" || name == "id" || name == "identity") {
        return identity();
    }
    if (name == "S") {
        return S();
    }
    if (name == "T") {
        return T();
    }
    if (name == "S^-1" || name == "Sinv") {
        return S().inverse();
    }
    if (name == "T^-1" || name == "Tinv") {
        return T().inverse();
    }
    std::vector<std::int64_t> v;
    std::stringstream ss(name);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            v.push_back(std::stoll(item));
        } catch (const std::exception&) {
            throw std::invalid_argument("cannot parse group element '" + name + "'");
        }
    }
    if (v.size() != 4) {
        throw std::invalid_argument("cannot parse group element '" + name + "'");
    }
    return {v[0], v[1], v[2], v[3]};
}

GroupElement operator*(const GroupElement& x, const GroupElement& y)
{
    return {x.a_ * y.a_ + x.b_ * y.c_, x.a_ * y.b_ + x.b_ * y.d_, x.c_ * y.a_ + x.d_ * y.c_,
            x.c_ * y.b_ + x.d_ * y.d_};
}

void require_upper_half_plane(Complex tau)
{
    if (!(tau.imag() > 0)) {
        throw DomainError("tau must lie in the upper half-plane");
    }
}

Complex GroupElement::automorphy(Complex tau) const
{
    return static_cast<double>(c_) * tau + static_cast<double>(d_);
}

Complex GroupElement::act(Complex tau) const
{
    require_upper_half_plane(tau);
    const Complex j = automorphy(tau);
    return (static_cast<double>(a_) * tau + static_cast<double>(b_)) / j;
}

Complex GroupElement::log_automorphy(Complex tau) const
{
    require_upper_half_plane(tau);
    return std::log(automorphy(tau));
}

std::string GroupElement::to_string() const
{
    std::ostringstream os;
    os << "(" << a_ << " " << b_ << "; " << c_ << " " << d_ << ")";
    return os.str();
}

int branch_cocycle(const GroupElement& g1, const GroupElement& g2, Complex tau)
{
    const Complex lhs = g1.log_automorphy(g2.act(tau)) + g2.log_automorphy(tau);
    const Complex rhs = (g1 * g2).log_automorphy(tau);
    return static_cast<int>(std::lround((lhs - rhs).imag() / (2 * std::numbers::pi)));
}

}  // namespace qtrace
