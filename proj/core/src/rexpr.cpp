#include "qtrace/rexpr.hpp"

#include <cmath>
#include <numbers>

#include "qtrace/elliptic_numeric.hpp"

namespace qtrace {

namespace {

constexpr Complex two_pi_i{0.0, 2.0 * std::numbers::pi};

Rational rational_from_json(const nlohmann::json& j)
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
    throw std::invalid_argument("expected a rational as string or number, got " + j.dump());
}

GaussRational gauss_from_json(const nlohmann::json& j)
{
    if (j.is_array()) {
        if (j.size() != 2) {
            throw std::invalid_argument("complex constant must be [re, im]");
        }
        return {rational_from_json(j[0]), rational_from_json(j[1])};
    }
    return {rational_from_json(j), 0};
}

int int_field(const nlohmann::json& j, const char* key)
{
    const auto& v = j.at(key);
    if (!v.is_number_integer()) {
        throw std::invalid_argument(std::string("field \"") + key + "\" must be an integer");
    }
    return v.get<int>();
}

Complex to_complex(const GaussRational& c) { return {to_double(c.re), to_double(c.im)}; }

Complex log_eta_value(Complex tau, int q_order)
{
    const Complex q = nome(tau);
    Complex sum = two_pi_i * tau / 24.0;
    Complex qn = 1.0;
    const int terms = std::max(q_order, 1) * 4;
    for (int n = 1; n <= terms; ++n) {
        qn *= q;
        if (std::abs(qn) < 1e-20) {
            break;
        }
        sum += std::log(1.0 - qn);
    }
    return sum;
}

}  // namespace

struct FExpr::Node {
    Kind kind = Kind::constant;
    GaussRational value{0, 0};
    Rational power{0};
    int index = 0;
    int r = 0;
    int s = 0;
    std::vector<FExpr> args;
};

FExpr::FExpr() : node_(std::make_shared<const Node>()) {}

FExpr::FExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

FExpr FExpr::constant(GaussRational c)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::constant;
    n->value = std::move(c);
    return FExpr(n);
}

FExpr FExpr::G(int k)
{
    if (k < 2 || k % 2 != 0) {
        throw std::invalid_argument("G~_k needs an even k >= 2, got " + std::to_string(k));
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::eisenstein;
    n->index = k;
    return FExpr(n);
}

FExpr FExpr::wp(int m, int r, int s)
{
    if (m < 1) {
        throw std::invalid_argument("wp~_m needs m >= 1");
    }
    if (r < 1 || s < 0 || r == s) {
        throw std::invalid_argument("wp~_m needs variable indices r >= 1, s >= 0 and r != s");
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::wp;
    n->index = m;
    n->r = r;
    n->s = s;
    return FExpr(n);
}

FExpr FExpr::zdiff(int r, int s)
{
    if (r < 1 || s < 1 || r == s) {
        throw std::invalid_argument("zdiff needs distinct variable indices >= 1");
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::zdiff;
    n->r = r;
    n->s = s;
    return FExpr(n);
}

FExpr FExpr::tau()
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::tau;
    return FExpr(n);
}

FExpr FExpr::eta(const Rational& power)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::eta;
    n->power = power;
    return FExpr(n);
}

FExpr FExpr::log_eta()
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::log_eta;
    return FExpr(n);
}

FExpr FExpr::dq(FExpr e)
{
    if (e.kind() == Kind::constant) {
        return FExpr();
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::dq;
    n->args = {std::move(e)};
    return FExpr(n);
}

FExpr FExpr::add(std::vector<FExpr> terms)
{
    std::vector<FExpr> kept;
    for (auto& t : terms) {
        if (!t.is_zero()) {
            kept.push_back(std::move(t));
        }
    }
    if (kept.empty()) {
        return FExpr();
    }
    if (kept.size() == 1) {
        return kept.front();
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::add;
    n->args = std::move(kept);
    return FExpr(n);
}

FExpr FExpr::mul(std::vector<FExpr> factors)
{
    std::vector<FExpr> kept;
    for (auto& f : factors) {
        if (f.is_zero()) {
            return FExpr();
        }
        if (f.kind() == Kind::constant && f.value() == GaussRational{1, 0}) {
            continue;
        }
        kept.push_back(std::move(f));
    }
    if (kept.empty()) {
        return constant(Rational(1));
    }
    if (kept.size() == 1) {
        return kept.front();
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::mul;
    n->args = std::move(kept);
    return FExpr(n);
}

FExpr FExpr::pow(FExpr base, int exponent)
{
    if (exponent == 0) {
        return constant(Rational(1));
    }
    if (exponent == 1) {
        return base;
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::pow;
    n->index = exponent;
    n->args = {std::move(base)};
    return FExpr(n);
}

FExpr FExpr::exp(FExpr e)
{
    auto n = std::make_shared<Node>();
    n->kind = Kind::exp;
    n->args = {std::move(e)};
    return FExpr(n);
}

FExpr::Kind FExpr::kind() const { return node_->kind; }
int FExpr::index() const { return node_->index; }
int FExpr::r() const { return node_->r; }
int FExpr::s() const { return node_->s; }
const GaussRational& FExpr::value() const { return node_->value; }
const Rational& FExpr::eta_power() const { return node_->power; }
const std::vector<FExpr>& FExpr::args() const { return node_->args; }

bool FExpr::is_zero() const { return node_->kind == Kind::constant && node_->value.is_zero(); }

FExpr FExpr::from_json(const nlohmann::json& j)
{
    if (j.is_string() || j.is_number()) {
        return constant(gauss_from_json(j));
    }
    if (!j.is_object() || j.empty()) {
        throw std::invalid_argument("malformed expression: " + j.dump());
    }
    if (j.contains("const")) {
        return constant(gauss_from_json(j.at("const")));
    }
    if (j.contains("G")) {
        return G(int_field(j, "G"));
    }
    if (j.contains("wp")) {
        return wp(int_field(j, "wp"), int_field(j, "r"), j.contains("s") ? int_field(j, "s") : 0);
    }
    if (j.contains("zdiff")) {
        const auto& v = j.at("zdiff");
        if (!v.is_array() || v.size() != 2) {
            throw std::invalid_argument("zdiff must be [r, s]");
        }
        return zdiff(v[0].get<int>(), v[1].get<int>());
    }
    if (j.contains("tau")) {
        return tau();
    }
    if (j.contains("eta")) {
        return eta(rational_from_json(j.at("eta")));
    }
    if (j.contains("log_eta")) {
        return log_eta();
    }
    if (j.contains("dq")) {
        return dq(from_json(j.at("dq")));
    }
    auto list = [&](const char* key) {
        const auto& v = j.at(key);
        if (!v.is_array()) {
            throw std::invalid_argument(std::string(key) + " expects an array");
        }
        std::vector<FExpr> out;
        for (const auto& e : v) {
            out.push_back(from_json(e));
        }
        return out;
    };
    if (j.contains("add")) {
        return add(list("add"));
    }
    if (j.contains("mul")) {
        return mul(list("mul"));
    }
    if (j.contains("pow")) {
        const auto& v = j.at("pow");
        if (!v.is_array() || v.size() != 2 || !v[1].is_number_integer()) {
            throw std::invalid_argument("pow expects [expr, integer]");
        }
        return pow(from_json(v[0]), v[1].get<int>());
    }
    if (j.contains("exp")) {
        return exp(from_json(j.at("exp")));
    }
    throw std::invalid_argument("unknown expression node: " + j.dump());
}

nlohmann::json FExpr::to_json() const
{
    const Node& n = *node_;
    auto list = [&] {
        nlohmann::json out = nlohmann::json::array();
        for (const auto& a : n.args) {
            out.push_back(a.to_json());
        }
        return out;
    };
    switch (n.kind) {
    case Kind::constant:
        if (n.value.im == 0) {
            return {{"const", qtrace::to_string(n.value.re)}};
        }
        return {{"const", {qtrace::to_string(n.value.re), qtrace::to_string(n.value.im)}}};
    case Kind::eisenstein:
        return {{"G", n.index}};
    case Kind::wp:
        if (n.s == 0) {
            return {{"wp", n.index}, {"r", n.r}};
        }
        return {{"wp", n.index}, {"r", n.r}, {"s", n.s}};
    case Kind::zdiff:
        return {{"zdiff", {n.r, n.s}}};
    case Kind::tau:
        return {{"tau", true}};
    case Kind::eta:
        return {{"eta", qtrace::to_string(n.power)}};
    case Kind::log_eta:
        return {{"log_eta", true}};
    case Kind::dq:
        return {{"dq", n.args[0].to_json()}};
    case Kind::add:
        return {{"add", list()}};
    case Kind::mul:
        return {{"mul", list()}};
    case Kind::pow:
        return {{"pow", {n.args[0].to_json(), n.index}}};
    case Kind::exp:
        return {{"exp", n.args[0].to_json()}};
    }
    return nullptr;
}

std::optional<Rational> FExpr::weight() const
{
    const Node& n = *node_;
    switch (n.kind) {
    case Kind::constant:
        return Rational(0);
    case Kind::eisenstein:
    case Kind::wp:
        return Rational(n.index);
    case Kind::zdiff:
        return Rational(-1);
    case Kind::tau:
    case Kind::log_eta:
        return std::nullopt;
    case Kind::eta:
        return n.power / 2;
    case Kind::dq: {
        auto w = n.args[0].weight();
        if (w) {
            *w += 2;
        }
        return w;
    }
    case Kind::add: {
        std::optional<Rational> w;
        for (const auto& a : n.args) {
            auto wa = a.weight();
            if (!wa || (w && *w != *wa)) {
                return std::nullopt;
            }
            w = wa;
        }
        return w;
    }
    case Kind::mul: {
        Rational w = 0;
        for (const auto& a : n.args) {
            auto wa = a.weight();
            if (!wa) {
                return std::nullopt;
            }
            w += *wa;
        }
        return w;
    }
    case Kind::pow: {
        auto w = n.args[0].weight();
        if (w) {
            *w *= n.index;
        }
        return w;
    }
    case Kind::exp: {
        auto w = n.args[0].weight();
        if (w && *w == 0) {
            return Rational(0);
        }
        return std::nullopt;
    }
    }
    return std::nullopt;
}

int FExpr::max_variable() const
{
    int out = std::max(node_->r, node_->s);
    for (const auto& a : node_->args) {
        out = std::max(out, a.max_variable());
    }
    return out;
}

Complex FExpr::eval(std::span<const Complex> z, Complex tau, int q_order) const
{
    const Node& n = *node_;
    auto var = [&](int i) {
        if (i < 1 || static_cast<std::size_t>(i) > z.size()) {
            throw std::invalid_argument("expression references z_" + std::to_string(i) + " beyond the supplied variables");
        }
        return z[static_cast<std::size_t>(i - 1)];
    };
    switch (n.kind) {
    case Kind::constant:
        return to_complex(n.value);
    case Kind::eisenstein:
        return eisenstein_value(n.index / 2 - 1, tau, q_order);
    case Kind::wp:
        return wp_value(n.index, n.s == 0 ? var(n.r) : var(n.r) - var(n.s), tau, q_order);
    case Kind::zdiff:
        return var(n.r) - var(n.s);
    case Kind::tau:
        return tau;
    case Kind::eta:
        return std::exp(to_double(n.power) * log_eta_value(tau, q_order));
    case Kind::log_eta:
        return log_eta_value(tau, q_order);
    case Kind::dq: {
        // (2 pi i)^2 q d/dq = 2 pi i d/dtau; five-point stencil
        const double h = 1e-3;
        const FExpr& e = n.args[0];
        auto f = [&](double t) { return e.eval(z, tau + t, q_order); };
        const Complex d = (-f(2 * h) + 8.0 * f(h) - 8.0 * f(-h) + f(-2 * h)) / (12.0 * h);
        return two_pi_i * d;
    }
    case Kind::add: {
        Complex out{};
        for (const auto& a : n.args) {
            out += a.eval(z, tau, q_order);
        }
        return out;
    }
    case Kind::mul: {
        Complex out{1.0, 0.0};
        for (const auto& a : n.args) {
            out *= a.eval(z, tau, q_order);
        }
        return out;
    }
    case Kind::pow:
        return std::pow(n.args[0].eval(z, tau, q_order), n.index);
    case Kind::exp:
        return std::exp(n.args[0].eval(z, tau, q_order));
    }
    return {};
}

std::string FExpr::to_string() const
{
    const Node& n = *node_;
    auto joined = [&](const char* sep) {
        std::string out;
        for (std::size_t i = 0; i < n.args.size(); ++i) {
            if (i > 0) {
                out += sep;
            }
            out += n.args[i].to_string();
        }
        return out;
    };
    switch (n.kind) {
    case Kind::constant:
        if (n.value.im == 0) {
            return qtrace::to_string(n.value.re);
        }
        return "(" + qtrace::to_string(n.value.re) + "+" + qtrace::to_string(n.value.im) + "i)";
    case Kind::eisenstein:
        return "G" + std::to_string(n.index);
    case Kind::wp:
        return "wp" + std::to_string(n.index) + "(z" + std::to_string(n.r) +
               (n.s == 0 ? std::string() : "-z" + std::to_string(n.s)) + ")";
    case Kind::zdiff:
        return "(z" + std::to_string(n.r) + "-z" + std::to_string(n.s) + ")";
    case Kind::tau:
        return "tau";
    case Kind::eta:
        return "eta^" + qtrace::to_string(n.power);
    case Kind::log_eta:
        return "log_eta";
    case Kind::dq:
        return "dq(" + n.args[0].to_string() + ")";
    case Kind::add:
        return "(" + joined(" + ") + ")";
    case Kind::mul:
        return joined("*");
    case Kind::pow:
        return "(" + n.args[0].to_string() + ")^" + std::to_string(n.index);
    case Kind::exp:
        return "exp(" + n.args[0].to_string() + ")";
    }
    return {};
}

namespace {

FExpr theta_wp(const FExpr& f, int j)
{
    const int m = f.index();
    const int r = f.r();
    const int s = f.s();
    const FExpr mm = FExpr::constant(Rational(m));
    const FExpr next = FExpr::wp(m + 1, r, s);
    auto a = [&](int i) { return i == j ? FExpr() : FExpr::wp(1, i, j); };
    return FExpr::add({
        FExpr::dq(f),
        FExpr::mul({mm, FExpr::G(2), f}),
        FExpr::mul({FExpr::constant(Rational(-m)), FExpr::G(2), FExpr::zdiff(r, s), next}),
        FExpr::mul({mm, next, FExpr::add({a(r), FExpr::mul({FExpr::constant(Rational(-1)), a(s)})})}),
    });
}

}  // namespace

FExpr theta(const FExpr& f, int j, int n)
{
    if (j < 1 || j > n) {
        throw std::invalid_argument("theta_j: j = " + std::to_string(j) + " outside 1.." + std::to_string(n));
    }
    using Kind = FExpr::Kind;
    switch (f.kind()) {
    case Kind::constant:
        return FExpr();
    case Kind::eisenstein:
        if (f.index() < 4) {
            break;
        }
        return FExpr::add({FExpr::dq(f), FExpr::mul({FExpr::constant(Rational(f.index())), FExpr::G(2), f})});
    case Kind::wp:
        if (f.index() < 2 || f.s() == 0) {
            break;
        }
        if (f.r() > n || f.s() > n) {
            throw std::invalid_argument("theta_j: " + f.to_string() + " references a variable beyond n = " +
                                        std::to_string(n));
        }
        return theta_wp(f, j);
    case Kind::add: {
        std::vector<FExpr> terms;
        for (const auto& a : f.args()) {
            terms.push_back(theta(a, j, n));
        }
        return FExpr::add(std::move(terms));
    }
    case Kind::mul: {
        std::vector<FExpr> terms;
        const auto& factors = f.args();
        for (std::size_t i = 0; i < factors.size(); ++i) {
            FExpr d = theta(factors[i], j, n);
            if (d.is_zero()) {
                continue;
            }
            std::vector<FExpr> prod;
            for (std::size_t k = 0; k < factors.size(); ++k) {
                prod.push_back(k == i ? d : factors[k]);
            }
            terms.push_back(FExpr::mul(std::move(prod)));
        }
        return FExpr::add(std::move(terms));
    }
    case Kind::pow: {
        if (f.index() < 0) {
            break;
        }
        const FExpr& base = f.args()[0];
        return FExpr::mul({FExpr::constant(Rational(f.index())), FExpr::pow(base, f.index() - 1), theta(base, j, n)});
    }
    default:
        break;
    }
    throw UnsupportedGenerator("theta_j: unsupported generator " + f.to_string());
}

}  // namespace qtrace
