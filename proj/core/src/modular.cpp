#include "qtrace/modular.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

#include "qtrace/elliptic.hpp"
#include "qtrace/elliptic_numeric.hpp"

namespace qtrace {

namespace {

constexpr Complex two_pi_i{0.0, 2.0 * std::numbers::pi};

using SeqPtr = std::shared_ptr<const VectorSeq>;

bool dominates(const MultiIndex& nu, const MultiIndex& mu)
{
    for (std::size_t i = 0; i < mu.size(); ++i) {
        if (nu[i] < mu[i]) {
            return false;
        }
    }
    return true;
}

double factorial_d(int k)
{
    double out = 1.0;
    for (int i = 2; i <= k; ++i) {
        out *= i;
    }
    return out;
}

/// sum over support nu >= mu of prod_i c^{k_i}/k_i! phi_nu(z, tau), k = nu - mu.
Complex shifted_sum(const VectorSeq& phi, const MultiIndex& mu, Complex c, std::span<const Complex> z, Complex tau)
{
    Complex out{};
    for (const auto& [nu, comp] : phi.components()) {
        if (!dominates(nu, mu)) {
            continue;
        }
        Complex coef{1.0, 0.0};
        for (std::size_t i = 0; i < mu.size(); ++i) {
            const int k = nu[i] - mu[i];
            coef *= std::pow(c, k) / factorial_d(k);
        }
        out += coef * phi.eval(nu, z, tau);
    }
    return out;
}

Complex d_tau(const Evaluator& f, std::span<const Complex> z, Complex tau, const NumericOptions& opts)
{
    auto central = [&](double h) { return (f(z, tau + h) - f(z, tau - h)) / (2.0 * h); };
    if (!opts.richardson) {
        return central(opts.step);
    }
    return (4.0 * central(opts.step / 2) - central(opts.step)) / 3.0;
}

Complex d_z(const Evaluator& f, std::size_t i, std::span<const Complex> z, Complex tau, const NumericOptions& opts)
{
    std::vector<Complex> w(z.begin(), z.end());
    auto central = [&](double h) {
        w[i] = z[i] + h;
        const Complex plus = f(w, tau);
        w[i] = z[i] - h;
        const Complex minus = f(w, tau);
        w[i] = z[i];
        return (plus - minus) / (2.0 * h);
    };
    if (!opts.richardson) {
        return central(opts.step);
    }
    return (4.0 * central(opts.step / 2) - central(opts.step)) / 3.0;
}

void check_j(int j, int n)
{
    if (j < 1 || j > n) {
        throw std::invalid_argument("variable index j = " + std::to_string(j) + " outside 1.." + std::to_string(n));
    }
}

Scalar scalar_like(const MultiSeries& f, const Scalar& exact)
{
    return f.kind() == Scalar::Kind::exact ? exact : exact.to_numeric();
}

MultiSeries g2_like(const MultiSeries& f)
{
    const std::size_t qi = f.var_index("q");
    if (!f.trunc(qi)) {
        throw SeriesError("series mode needs a finite q truncation to multiply by G~_2");
    }
    Integer ceil_trunc;
    mpz_cdiv_q(ceil_trunc.get_mpz_t(), f.trunc(qi)->get_num_mpz_t(), f.trunc(qi)->get_den_mpz_t());
    const long n = std::max(0L, ceil_trunc.get_si() - 1);
    MultiSeries g2 = lift_q_series(eisenstein(0, static_cast<int>(n)).expansion, f.vars());
    return f.kind() == Scalar::Kind::exact ? g2 : g2.to_numeric();
}

MultiSeries series_O(const MultiSeries& f, const Rational& alpha)
{
    const std::size_t qi = f.var_index("q");
    MultiSeries out = f.euler(qi) * scalar_like(f, Scalar::two_pi_i_pow(2));
    MultiSeries inner = f * scalar_like(f, Scalar(alpha));
    for (std::size_t v = 0; v < f.nvars(); ++v) {
        if (v != qi) {
            inner += f.euler(v);
        }
    }
    if (!inner.is_zero()) {
        out += g2_like(f) * inner;
    }
    return out;
}

bool use_series(const VectorSeq& phi) { return phi.n() == 1 && phi.series_mode() && !phi.components().empty(); }

/// Evaluator-mode O_j(alpha) applied to one component function.
Complex o_value(const Evaluator& f, int j, double alpha, std::span<const Complex> z, Complex tau,
                const NumericOptions& opts)
{
    const Complex value = f(z, tau);
    const Complex g2 = g2_value(tau, opts.q_order);
    Complex euler_sum{};
    Complex wp_sum{};
    for (std::size_t i = 0; i < z.size(); ++i) {
        const Complex dz = d_z(f, i, z, tau, opts);
        euler_sum += z[i] * dz;
        if (static_cast<int>(i) + 1 != j) {
            wp_sum += wp_value(1, z[i] - z[static_cast<std::size_t>(j - 1)], tau, opts.q_order) * dz;
        }
    }
    return two_pi_i * d_tau(f, z, tau, opts) + g2 * (alpha * value + euler_sum) - wp_sum;
}

VectorSeq apply_O_or_D(const VectorSeq& phi, int j, const Rational& alpha, const NumericOptions& opts, bool with_shifts)
{
    check_j(j, phi.n());
    VectorSeq out(phi.n(), phi.support_bound());
    if (use_series(phi)) {
        for (const auto& mu : phi.closure()) {
            const MultiSeries* f = phi.series(mu);
            MultiIndex up = mu;
            ++up[0];
            const MultiSeries* next = with_shifts ? phi.series(up) : nullptr;
            if (!f && !next) {
                continue;
            }
            MultiSeries value = f ? series_O(*f, alpha) : next->empty_like();
            if (next) {
                value += g2_like(*next) * *next;
            }
            out.set(mu, std::move(value));
        }
        return out;
    }
    const auto src = std::make_shared<const VectorSeq>(phi);
    const double a = to_double(alpha);
    for (const auto& mu : phi.closure()) {
        std::vector<MultiIndex> ups;
        if (with_shifts) {
            for (int i = 0; i < phi.n(); ++i) {
                MultiIndex up = mu;
                ++up[static_cast<std::size_t>(i)];
                if (phi.components().count(up)) {
                    ups.push_back(up);
                }
            }
        }
        out.set(mu, Evaluator([src, mu, ups, j, a, opts](std::span<const Complex> z, Complex tau) {
            Complex value{};
            if (src->components().count(mu)) {
                value = o_value(src->evaluator(mu), j, a, z, tau, opts);
            }
            if (!ups.empty()) {
                Complex shifts{};
                for (const auto& up : ups) {
                    shifts += src->eval(up, z, tau);
                }
                value += g2_value(tau, opts.q_order) * shifts;
            }
            return value;
        }));
    }
    return out;
}

}  // namespace

VectorSeq::VectorSeq(int n, int support_bound) : n_(n), bound_(support_bound)
{
    if (n < 1) {
        throw std::invalid_argument("VectorSeq needs n >= 1");
    }
    if (support_bound < 0) {
        throw std::invalid_argument("support bound must be non-negative");
    }
}

void VectorSeq::check_index(const MultiIndex& mu) const
{
    if (mu.size() != static_cast<std::size_t>(n_)) {
        throw std::invalid_argument("multi-index has " + std::to_string(mu.size()) + " entries, expected " +
                                    std::to_string(n_));
    }
    for (int i : mu) {
        if (i < 0 || i > bound_) {
            throw std::invalid_argument("multi-index entry " + std::to_string(i) + " outside 0.." +
                                        std::to_string(bound_));
        }
    }
}

void VectorSeq::set(const MultiIndex& mu, Component c)
{
    check_index(mu);
    comps_.insert_or_assign(mu, std::move(c));
}

bool VectorSeq::series_mode() const
{
    for (const auto& [mu, c] : comps_) {
        if (!std::holds_alternative<MultiSeries>(c)) {
            return false;
        }
    }
    return true;
}

Complex VectorSeq::eval(const MultiIndex& mu, std::span<const Complex> z, Complex tau) const
{
    auto it = comps_.find(mu);
    if (it == comps_.end()) {
        return {};
    }
    if (const auto* f = std::get_if<Evaluator>(&it->second)) {
        return (*f)(z, tau);
    }
    const auto& s = std::get<MultiSeries>(it->second);
    return eval_at(s, std::vector<Complex>(z.begin(), z.end()), tau).value;
}

Evaluator VectorSeq::evaluator(const MultiIndex& mu) const
{
    auto it = comps_.find(mu);
    if (it == comps_.end()) {
        return [](std::span<const Complex>, Complex) { return Complex{}; };
    }
    if (const auto* f = std::get_if<Evaluator>(&it->second)) {
        return *f;
    }
    auto s = std::make_shared<const MultiSeries>(std::get<MultiSeries>(it->second));
    return [s](std::span<const Complex> z, Complex tau) {
        return eval_at(*s, std::vector<Complex>(z.begin(), z.end()), tau).value;
    };
}

const MultiSeries* VectorSeq::series(const MultiIndex& mu) const
{
    auto it = comps_.find(mu);
    if (it == comps_.end()) {
        return nullptr;
    }
    return std::get_if<MultiSeries>(&it->second);
}

std::vector<MultiIndex> VectorSeq::closure() const
{
    std::set<MultiIndex> out;
    for (const auto& [nu, c] : comps_) {
        MultiIndex mu(nu.size(), 0);
        while (true) {
            out.insert(mu);
            std::size_t i = 0;
            while (i < mu.size() && mu[i] == nu[i]) {
                mu[i] = 0;
                ++i;
            }
            if (i == mu.size()) {
                break;
            }
            ++mu[i];
        }
    }
    return {out.begin(), out.end()};
}

VectorSeq VectorSeq::from_json(const nlohmann::json& j, int n, int q_order)
{
    const nlohmann::json* list = &j;
    int bound = 4;
    if (j.is_object()) {
        bound = j.value("support_bound", 4);
        list = &j.at("components");
    }
    if (!list->is_array()) {
        throw std::invalid_argument("components must be an array");
    }
    VectorSeq out(n, bound);
    for (const auto& entry : *list) {
        MultiIndex mu = entry.at("index").get<MultiIndex>();
        FExpr e = FExpr::from_json(entry.at("expr"));
        if (e.max_variable() > n) {
            throw std::invalid_argument("component " + e.to_string() + " references more than n variables");
        }
        out.set(mu, Evaluator([e, q_order](std::span<const Complex> z, Complex tau) { return e.eval(z, tau, q_order); }));
    }
    return out;
}

VectorSeq shift(const VectorSeq& phi, int j)
{
    check_j(j, phi.n());
    VectorSeq out(phi.n(), phi.support_bound());
    for (const auto& [nu, c] : phi.components()) {
        if (nu[static_cast<std::size_t>(j - 1)] == 0) {
            continue;
        }
        MultiIndex mu = nu;
        --mu[static_cast<std::size_t>(j - 1)];
        out.set(mu, c);
    }
    return out;
}

VectorSeq apply_O(const VectorSeq& phi, int j, const Rational& alpha, const NumericOptions& opts)
{
    return apply_O_or_D(phi, j, alpha, opts, false);
}

VectorSeq apply_D(const VectorSeq& phi, int j, const Rational& alpha, const NumericOptions& opts)
{
    return apply_O_or_D(phi, j, alpha, opts, true);
}

VectorSeq apply_D_product(const VectorSeq& phi, int j, const Rational& alpha, int k, const NumericOptions& opts)
{
    VectorSeq out = phi;
    for (int l = 0; l < k; ++l) {
        out = apply_D(out, j, alpha + 2 * l, opts);
    }
    return out;
}

VectorSeq apply_action(const VectorSeq& phi, const GroupElement& g, const Rational& a)
{
    const auto src = std::make_shared<const VectorSeq>(phi);
    const double weight = to_double(a);
    VectorSeq out(phi.n(), phi.support_bound());
    for (const auto& mu : phi.closure()) {
        out.set(mu, Evaluator([src, g, weight, mu](std::span<const Complex> z, Complex tau) {
            const Complex j = g.automorphy(tau);
            if (std::abs(j) == 0.0) {
                throw DomainError("gamma tau + delta vanishes");
            }
            const Complex log_j = g.log_automorphy(tau);
            std::vector<Complex> scaled(z.begin(), z.end());
            for (auto& zi : scaled) {
                zi /= j;
            }
            return std::exp(-weight * log_j) * shifted_sum(*src, mu, -log_j, scaled, g.act(tau));
        }));
    }
    return out;
}

VectorSeq shift_exponential(const VectorSeq& phi, Complex c)
{
    const auto src = std::make_shared<const VectorSeq>(phi);
    VectorSeq out(phi.n(), phi.support_bound());
    for (const auto& mu : phi.closure()) {
        out.set(mu, Evaluator([src, c, mu](std::span<const Complex> z, Complex tau) {
            return shifted_sum(*src, mu, c, z, tau);
        }));
    }
    return out;
}

ModularOperator ModularOperator::O(int j, const Rational& alpha)
{
    ModularOperator op;
    op.kind_ = Kind::O;
    op.j_ = j;
    op.alpha_ = alpha;
    return op;
}

ModularOperator ModularOperator::D(int j, const Rational& alpha)
{
    ModularOperator op = O(j, alpha);
    op.kind_ = Kind::D;
    return op;
}

ModularOperator ModularOperator::compose(std::vector<ModularOperator> factors)
{
    ModularOperator op;
    op.kind_ = Kind::compose;
    op.factors_ = std::move(factors);
    return op;
}

ModularOperator ModularOperator::D_product(int j, const Rational& alpha, int k)
{
    std::vector<ModularOperator> factors;
    for (int l = 1; l <= k; ++l) {
        factors.push_back(D(j, alpha + 2 * (k - l)));
    }
    return compose(std::move(factors));
}

int ModularOperator::weight_gain() const
{
    if (kind_ != Kind::compose) {
        return 2;
    }
    int out = 0;
    for (const auto& f : factors_) {
        out += f.weight_gain();
    }
    return out;
}

VectorSeq ModularOperator::apply(const VectorSeq& phi, const NumericOptions& opts) const
{
    switch (kind_) {
    case Kind::O:
        return apply_O(phi, j_, alpha_, opts);
    case Kind::D:
        return apply_D(phi, j_, alpha_, opts);
    case Kind::compose:
        break;
    }
    VectorSeq out = phi;
    for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) {
        out = it->apply(out, opts);
    }
    return out;
}

std::string ModularOperator::to_string() const
{
    switch (kind_) {
    case Kind::O:
        return "O_" + std::to_string(j_) + "(" + qtrace::to_string(alpha_) + ")";
    case Kind::D:
        return "D_" + std::to_string(j_) + "(" + qtrace::to_string(alpha_) + ")";
    case Kind::compose:
        break;
    }
    if (factors_.empty()) {
        return "id";
    }
    std::string out;
    for (std::size_t i = 0; i < factors_.size(); ++i) {
        out += (i ? " o " : "") + factors_[i].to_string();
    }
    return out;
}

std::vector<ModularSample> modular_samples_from_json(const nlohmann::json& j, int n)
{
    if (!j.is_array()) {
        throw std::invalid_argument("samples must be a JSON array");
    }
    auto pair = [](const nlohmann::json& v) {
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
            throw std::invalid_argument("complex values must be [re, im]");
        }
        return Complex(v[0].get<double>(), v[1].get<double>());
    };
    std::vector<ModularSample> out;
    for (const auto& entry : j) {
        ModularSample s;
        const auto& z = entry.at("z");
        if (z.is_array() && !z.empty() && z[0].is_array()) {
            for (const auto& zi : z) {
                s.z.push_back(pair(zi));
            }
        } else {
            s.z.push_back(pair(z));
        }
        if (static_cast<int>(s.z.size()) != n) {
            throw std::invalid_argument("sample has " + std::to_string(s.z.size()) + " z-values, expected " +
                                        std::to_string(n));
        }
        s.tau = pair(entry.at("tau"));
        require_upper_half_plane(s.tau);
        out.push_back(std::move(s));
    }
    return out;
}

nlohmann::json modular_samples_to_json(const std::vector<ModularSample>& samples)
{
    nlohmann::json out = nlohmann::json::array();
    for (const auto& s : samples) {
        nlohmann::json z = nlohmann::json::array();
        for (const auto& zi : s.z) {
            z.push_back({zi.real(), zi.imag()});
        }
        out.push_back({{"z", z}, {"tau", {s.tau.real(), s.tau.imag()}}});
    }
    return out;
}

std::vector<ModularSample> default_modular_samples(int n)
{
    std::vector<ModularSample> out;
    for (const auto& s : default_sample_grid()) {
        ModularSample m;
        m.tau = s.tau;
        for (int i = 0; i < n; ++i) {
            // spread the points so that pairwise differences stay away from the lattice
            m.z.push_back(i == 0 ? s.z : s.z * Complex(-0.5 / i, 0.0) + Complex(0.05 * i, 0.03 * i));
        }
        out.push_back(std::move(m));
    }
    return out;
}

namespace {

struct DeviationTable {
    double max_dev = 0.0;
    nlohmann::json rows = nlohmann::json::array();

    void add(std::size_t sample, const MultiIndex& mu, double dev, nlohmann::json extra = nlohmann::json::object())
    {
        max_dev = std::max(max_dev, dev);
        extra["sample"] = sample;
        extra["index"] = mu;
        extra["deviation"] = dev;
        rows.push_back(std::move(extra));
    }
};

}  // namespace

CheckReport group_law_check(const VectorSeq& phi, const GroupElement& g1, const GroupElement& g2, const Rational& a,
                            const std::vector<ModularSample>& samples, double tol)
{
    const VectorSeq lhs = apply_action(apply_action(phi, g1, a), g2, a);
    const VectorSeq rhs = apply_action(phi, g1 * g2, a);
    DeviationTable table;
    CheckReport report;
    report.id = "group_law_" + g1.to_string() + "_" + g2.to_string();
    for (std::size_t si = 0; si < samples.size(); ++si) {
        const auto& s = samples[si];
        const int w = branch_cocycle(g1, g2, s.tau);
        const Complex c = -two_pi_i * static_cast<double>(w);
        const Complex prefactor = std::exp(c * to_double(a));
        for (const auto& mu : phi.closure()) {
            const Complex l = lhs.eval(mu, s.z, s.tau);
            const Complex r = prefactor * shifted_sum(rhs, mu, c, s.z, s.tau);
            table.add(si, mu, std::abs(l - r), {{"cocycle", w}});
        }
        if (w != 0) {
            report.notes.push_back("sample " + std::to_string(si) + ": principal-branch cocycle w = " +
                                   std::to_string(w) + " applied");
        }
    }
    report.max_deviation = table.max_dev;
    report.tolerance = tol;
    report.pass = table.max_dev <= tol;
    report.notes.push_back("log(gamma tau + delta) on the principal branch");
    report.details = {{"g1", g1.to_string()}, {"g2", g2.to_string()}, {"a", to_string(a)}, {"points", table.rows}};
    return report;
}

CheckReport covariance_check(const VectorSeq& phi, const GroupElement& g, const Rational& a, int j,
                             const std::vector<ModularSample>& samples, double tol, const NumericOptions& opts)
{
    const VectorSeq lhs = apply_D(apply_action(phi, g, a), j, a, opts);
    const VectorSeq rhs = apply_action(apply_D(phi, j, a, opts), g, a + 2);
    DeviationTable table;
    for (std::size_t si = 0; si < samples.size(); ++si) {
        const auto& s = samples[si];
        for (const auto& mu : phi.closure()) {
            table.add(si, mu, std::abs(lhs.eval(mu, s.z, s.tau) - rhs.eval(mu, s.z, s.tau)));
        }
    }
    CheckReport report;
    report.id = "covariance_" + g.to_string() + "_j" + std::to_string(j);
    report.max_deviation = table.max_dev;
    report.tolerance = tol;
    report.pass = table.max_dev <= tol;
    report.notes.push_back("log(gamma tau + delta) on the principal branch");
    report.details = {{"g", g.to_string()},
                      {"a", to_string(a)},
                      {"j", j},
                      {"step", opts.step},
                      {"richardson", opts.richardson},
                      {"q_order", opts.q_order},
                      {"points", table.rows}};
    return report;
}

ModularSystem ModularSystem::from_json(const nlohmann::json& j)
{
    ModularSystem s;
    s.n = j.at("n").get<int>();
    s.order = j.at("order").get<int>();
    if (s.n < 1 || s.order < 1) {
        throw std::invalid_argument("system needs n >= 1 and order >= 1");
    }
    const auto& alpha = j.at("alpha");
    s.alpha = alpha.is_string() ? parse_rational(alpha.get<std::string>()) : Rational(alpha.get<long>());
    for (const auto& c : j.value("coeffs", nlohmann::json::array())) {
        SystemCoefficient coeff;
        coeff.p = c.at("p").get<int>();
        coeff.j = c.at("j").get<int>();
        coeff.expr = FExpr::from_json(c.at("expr"));
        const auto& w = c.at("weight");
        coeff.weight = w.is_string() ? parse_rational(w.get<std::string>()) : Rational(w.get<long>());
        if (coeff.p < 1 || coeff.p > s.order) {
            throw std::invalid_argument("coefficient p must lie in 1..order");
        }
        check_j(coeff.j, s.n);
        if (coeff.expr.max_variable() > s.n) {
            throw std::invalid_argument("coefficient " + coeff.expr.to_string() + " references more than n variables");
        }
        s.coeffs.push_back(std::move(coeff));
    }
    if (j.contains("phi")) {
        s.phi = j.at("phi");
    }
    return s;
}

nlohmann::json ModularSystem::to_json() const
{
    nlohmann::json coeffs = nlohmann::json::array();
    for (const auto& c : this->coeffs) {
        coeffs.push_back({{"p", c.p}, {"j", c.j}, {"expr", c.expr.to_json()}, {"weight", qtrace::to_string(c.weight)}});
    }
    nlohmann::json out = {{"n", n}, {"order", order}, {"alpha", qtrace::to_string(alpha)}, {"coeffs", coeffs}};
    if (phi) {
        out["phi"] = *phi;
    }
    return out;
}

VectorSeq flow_solution(int n, const Rational& alpha, int q_order)
{
    VectorSeq out(n);
    const FExpr eta = FExpr::eta(2 * alpha);
    const FExpr top = eta;
    const FExpr bottom = FExpr::mul({FExpr::constant(Rational(2)), eta, FExpr::log_eta()});
    MultiIndex zero(static_cast<std::size_t>(n), 0);
    MultiIndex one = zero;
    one[0] = 1;
    out.set(one, Evaluator([top, q_order](std::span<const Complex> z, Complex tau) { return top.eval(z, tau, q_order); }));
    out.set(zero,
            Evaluator([bottom, q_order](std::span<const Complex> z, Complex tau) { return bottom.eval(z, tau, q_order); }));
    return out;
}

VectorSeq system_solution(const ModularSystem& system, int q_order)
{
    if (system.phi) {
        return VectorSeq::from_json(*system.phi, system.n, q_order);
    }
    if (system.order == 1 && system.coeffs.empty()) {
        return flow_solution(system.n, system.alpha, q_order);
    }
    throw std::invalid_argument("system declares no solution \"phi\" and has no built-in one");
}

double system_residual(const ModularSystem& system, const VectorSeq& phi, const std::vector<ModularSample>& samples,
                       const NumericOptions& opts)
{
    double worst = 0.0;
    for (int j = 1; j <= system.n; ++j) {
        const VectorSeq lead = apply_D_product(phi, j, system.alpha, system.order, opts);
        std::vector<std::pair<FExpr, VectorSeq>> lower;
        for (const auto& c : system.coeffs) {
            if (c.j == j) {
                lower.emplace_back(c.expr,
                                   apply_D_product(phi, j, system.alpha, system.order - c.p, opts));
            }
        }
        for (const auto& s : samples) {
            for (const auto& mu : phi.closure()) {
                Complex r = lead.eval(mu, s.z, s.tau);
                for (const auto& [b, term] : lower) {
                    r += b.eval(s.z, s.tau, opts.q_order) * term.eval(mu, s.z, s.tau);
                }
                worst = std::max(worst, std::abs(r));
            }
        }
    }
    return worst;
}

CheckReport system_precheck(const ModularSystem& system, const std::vector<ModularSample>& samples)
{
    CheckReport report;
    report.id = "system_precheck";
    report.tolerance = 1e-6;
    nlohmann::json ledger = nlohmann::json::array();
    for (const auto& c : system.coeffs) {
        const std::string name = "b_{" + std::to_string(c.p) + "," + std::to_string(c.j) + "}";
        if (c.weight != 2 * c.p) {
            report.pass = false;
            report.notes.push_back(name + ": weight tag " + to_string(c.weight) + " differs from 2p = " +
                                   std::to_string(2 * c.p));
        }
        if (auto w = c.expr.weight(); w && *w != c.weight) {
            report.pass = false;
            report.notes.push_back(name + ": expression has modular weight " + to_string(*w) + ", tagged " +
                                   to_string(c.weight));
        }
        const ModularOperator tail = ModularOperator::D_product(c.j, system.alpha, system.order - c.p);
        ledger.push_back({{"coeff", name},
                          {"weight", to_string(c.weight)},
                          {"operator", tail.to_string()},
                          {"total", to_string(c.weight + tail.weight_gain())},
                          {"expected", 2 * system.order}});
        double worst = 0.0;
        for (const auto& s : samples) {
            for (const auto& g : {GroupElement::S(), GroupElement::T()}) {
                const Complex j = g.automorphy(s.tau);
                std::vector<Complex> scaled;
                for (const auto& zi : s.z) {
                    scaled.push_back(zi / j);
                }
                const Complex base = c.expr.eval(s.z, s.tau);
                const Complex lhs = c.expr.eval(scaled, g.act(s.tau));
                const Complex rhs = std::exp(to_double(c.weight) * g.log_automorphy(s.tau)) * base;
                worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
            }
        }
        report.max_deviation = std::max(report.max_deviation, worst);
        if (worst > report.tolerance) {
            report.pass = false;
            report.notes.push_back(name + ": fails weight-" + to_string(c.weight) +
                                   " covariance at the samples (relative deviation " + std::to_string(worst) + ")");
        }
    }
    report.details = {{"weight_ledger", ledger}};
    return report;
}

CheckReport solution_invariance_check(const ModularSystem& system, const VectorSeq& phi, const GroupElement& g,
                                      const std::vector<ModularSample>& samples, double tol, const NumericOptions& opts)
{
    CheckReport report;
    report.id = "solution_invariance_" + g.to_string();
    report.tolerance = tol;
    const CheckReport pre = system_precheck(system, samples);
    if (!pre.pass) {
        report.pass = false;
        report.notes.push_back("rejected: coefficient covariance precheck failed");
        report.notes.insert(report.notes.end(), pre.notes.begin(), pre.notes.end());
        report.details = {{"rejected", true}, {"precheck", pre.to_json()}};
        return report;
    }
    const double before = system_residual(system, phi, samples, opts);
    const double after = system_residual(system, apply_action(phi, g, system.alpha), samples, opts);
    report.max_deviation = after;
    report.pass = after <= std::max(10.0 * before, tol);
    report.notes.push_back("log(gamma tau + delta) on the principal branch");
    report.details = {{"rejected", false},
                      {"residual", before},
                      {"residual_transformed", after},
                      {"g", g.to_string()},
                      {"step", opts.step},
                      {"richardson", opts.richardson},
                      {"precheck", pre.to_json()}};
    return report;
}

}  // namespace qtrace
