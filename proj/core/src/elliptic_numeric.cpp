#include "qtrace/elliptic_numeric.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qtrace/number_theory.hpp"

namespace qtrace {

namespace {

constexpr Complex two_pi_i{0.0, 2.0 * std::numbers::pi};
constexpr Complex pi_i{0.0, std::numbers::pi};

Complex complex_pow(Complex base, const Rational& e, Complex log_base)
{
    if (is_integer(e)) {
        const long n = to_long(e);
        Complex out{1.0, 0.0};
        Complex b = n >= 0 ? base : 1.0 / base;
        for (long i = 0; i < std::labs(n); ++i) {
            out *= b;
        }
        return out;
    }
    return std::exp(to_double(e) * log_base);
}

void require_off_pole(Complex w)
{
    if (std::abs(1.0 - w) < 1e-14) {
        throw DomainError("evaluation point lies on a lattice point");
    }
}

}  // namespace

Complex nome(Complex tau)
{
    require_upper_half_plane(tau);
    return std::exp(two_pi_i * tau);
}

Evaluation eval_at(const MultiSeries& s, const std::vector<Complex>& z, Complex tau)
{
    const Complex q = nome(tau);
    const std::size_t n = s.nvars();
    std::vector<Complex> values(n);
    std::vector<Complex> logs(n);
    std::size_t next = 0;
    std::optional<std::size_t> q_index;
    for (std::size_t v = 0; v < n; ++v) {
        if (s.vars()[v] == "q") {
            values[v] = q;
            logs[v] = two_pi_i * tau;
            q_index = v;
            continue;
        }
        if (next >= z.size()) {
            throw std::invalid_argument("eval_at: no value supplied for variable " + s.vars()[v]);
        }
        values[v] = z[next++];
        logs[v] = std::log(values[v]);
    }

    Evaluation out{};
    const auto top = q_index ? s.max_exponent(*q_index) : std::nullopt;
    for (const auto& [m, c] : s.terms()) {
        Complex term = c.value();
        for (std::size_t v = 0; v < n; ++v) {
            if (m.exps[v] != 0) {
                term *= complex_pow(values[v], m.exps[v], logs[v]);
            }
            for (int l = 0; l < m.logs[v]; ++l) {
                term *= logs[v];
            }
        }
        out.value += term;
        if (top && m.exps[*q_index] == *top && *top != 0) {
            out.tail += std::abs(term);
        }
    }
    return out;
}

Complex eisenstein_value(int k, Complex tau, int q_order)
{
    if (k < 0) {
        throw std::invalid_argument("k must be non-negative");
    }
    const Complex q = nome(tau);
    const double prefactor = 2.0 / to_double(Rational(factorial(2 * k + 1)));
    Complex sum{};
    Complex ql = 1.0;
    for (int l = 1; l <= q_order; ++l) {
        ql *= q;
        sum += std::pow(static_cast<double>(l), 2 * k + 1) * ql / (1.0 - ql);
    }
    const Complex constant = zeta_even(static_cast<unsigned>(k + 1)).value() * 2.0;
    return constant + prefactor * std::pow(two_pi_i, 2 * k + 2) * sum;
}

Complex polylog_neg(int n, Complex w)
{
    if (n < 0) {
        throw std::invalid_argument("polylog_neg expects n >= 0");
    }
    require_off_pole(w);
    const Complex u = w / (1.0 - w);
    Complex out{};
    Complex power = u;
    double fact = 1.0;
    for (int j = 0; j <= n; ++j) {
        if (j > 0) {
            fact *= j;
        }
        out += fact * stirling2(static_cast<unsigned>(n + 1), static_cast<unsigned>(j + 1)).get_d() * power;
        power *= u;
    }
    return out;
}

Complex kernel_value(int m, Complex x, Complex tau, int q_order)
{
    if (m < 1) {
        throw std::invalid_argument("kernel_value expects m >= 1");
    }
    const Complex q = nome(tau);
    const double sign = (m - 1) % 2 == 0 ? 1.0 : -1.0;
    Complex sum{};
    Complex qk = 1.0;
    for (int k = 0; k <= q_order; ++k) {
        sum += polylog_neg(m - 1, x * qk) - sign * polylog_neg(m - 1, qk * q / x);
        qk *= q;
    }
    return std::pow(two_pi_i, m) / to_double(Rational(factorial(m - 1))) * sum;
}

Complex wp_value(int m, Complex z, Complex tau, int q_order)
{
    if (m < 1) {
        throw std::invalid_argument("wp_value expects m >= 1");
    }
    const Complex p = kernel_value(m, std::exp(two_pi_i * z), tau, q_order);
    Complex correction{};
    if (m == 1) {
        correction = g2_value(tau, q_order) * z - pi_i;
    } else if (m == 2) {
        correction = g2_value(tau, q_order);
    }
    const double sign = m % 2 == 0 ? 1.0 : -1.0;
    return sign * (p - correction);
}

Complex lattice_wp2(Complex z, Complex tau, int R)
{
    require_upper_half_plane(tau);
    Complex sum = 1.0 / (z * z);
    for (int l = -R; l <= R; ++l) {
        for (int k = -R; k <= R; ++k) {
            if (k == 0 && l == 0) {
                continue;
            }
            const Complex w = static_cast<double>(k) + static_cast<double>(l) * tau;
            const Complex d = z - w;
            sum += 1.0 / (d * d) - 1.0 / (w * w);
        }
    }
    return sum;
}

Complex lattice_wp2_extrapolated(Complex z, Complex tau)
{
    // W(R) = W + a R^-2 + b R^-3; solve from three radii.
    const double r[3] = {20.0, 30.0, 60.0};
    Complex w[3];
    for (int i = 0; i < 3; ++i) {
        w[i] = lattice_wp2(z, tau, static_cast<int>(r[i]));
    }
    // Eliminate a between consecutive pairs, then b.
    auto eliminate_a = [&](int i, int j, Complex& value, double& b_coef) {
        const double ai = 1.0 / (r[i] * r[i]);
        const double aj = 1.0 / (r[j] * r[j]);
        // (aj W_i - ai W_j) / (aj - ai) = W + b (aj/ri^3 - ai/rj^3) / (aj - ai)
        value = (aj * w[i] - ai * w[j]) / (aj - ai);
        b_coef = (aj / (r[i] * r[i] * r[i]) - ai / (r[j] * r[j] * r[j])) / (aj - ai);
    };
    Complex v01;
    Complex v12;
    double b01 = 0.0;
    double b12 = 0.0;
    eliminate_a(0, 1, v01, b01);
    eliminate_a(1, 2, v12, b12);
    return (b12 * v01 - b01 * v12) / (b12 - b01);
}

std::vector<Sample> samples_from_json(const nlohmann::json& j)
{
    if (!j.is_array()) {
        throw std::invalid_argument("samples must be a JSON array");
    }
    auto pair = [](const nlohmann::json& v, const char* what) {
        if (!v.is_array() || v.size() != 2) {
            throw std::invalid_argument(std::string("sample field ") + what + " must be [re, im]");
        }
        return Complex(v[0].get<double>(), v[1].get<double>());
    };
    std::vector<Sample> out;
    for (const auto& entry : j) {
        if (!entry.is_object() || !entry.contains("z") || !entry.contains("tau")) {
            throw std::invalid_argument("each sample needs \"z\" and \"tau\"");
        }
        Sample s{pair(entry.at("z"), "z"), pair(entry.at("tau"), "tau")};
        require_upper_half_plane(s.tau);
        out.push_back(s);
    }
    return out;
}

nlohmann::json samples_to_json(const std::vector<Sample>& samples)
{
    nlohmann::json out = nlohmann::json::array();
    for (const auto& s : samples) {
        out.push_back({{"z", {s.z.real(), s.z.imag()}}, {"tau", {s.tau.real(), s.tau.imag()}}});
    }
    return out;
}

std::vector<Sample> default_sample_grid()
{
    return {
        {{0.31, 0.17}, {0.0, 0.9}},   {{0.31, 0.17}, {0.0, 1.8}},   {{-0.22, 0.11}, {0.0, 1.0}},
        {{0.15, -0.2}, {0.0, 1.2}},   {{0.27, 0.05}, {0.2, 1.0}},   {{-0.12, -0.25}, {-0.3, 1.1}},
        {{0.2, 0.3}, {0.4, 0.95}},    {{0.35, -0.1}, {0.0, 1.5}},   {{-0.18, 0.14}, {-0.1, 0.8}},
    };
}

namespace {

struct Accumulator {
    double max_dev = 0.0;
    nlohmann::json rows = nlohmann::json::array();

    void add(const std::string& law, const Sample& s, Complex lhs, Complex rhs)
    {
        const double dev = std::abs(lhs - rhs);
        max_dev = std::max(max_dev, dev);
        rows.push_back({{"law", law},
                        {"z", {s.z.real(), s.z.imag()}},
                        {"tau", {s.tau.real(), s.tau.imag()}},
                        {"deviation", dev}});
    }
};

CheckReport finish(std::string id, Accumulator& acc, double tol, int q_order)
{
    CheckReport report;
    report.id = std::move(id);
    report.max_deviation = acc.max_dev;
    report.tolerance = tol;
    report.pass = acc.max_dev < tol;
    report.details = {{"q_order", q_order}, {"points", acc.rows}};
    return report;
}

}  // namespace

CheckReport quasi_periodicity_check(const std::vector<Sample>& samples, double tol, int q_order)
{
    Accumulator acc;
    for (const auto& s : samples) {
        const Complex base = wp_value(1, s.z, s.tau, q_order);
        const Complex g2 = g2_value(s.tau, q_order);
        acc.add("z+1", s, wp_value(1, s.z + 1.0, s.tau, q_order), base + g2);
        acc.add("z+tau", s, wp_value(1, s.z + s.tau, s.tau, q_order), base + g2 * s.tau - two_pi_i);
    }
    return finish("wp1_quasi_periodicity", acc, tol, q_order);
}

CheckReport modular_covariance_check(int m, const GroupElement& g, const std::vector<Sample>& samples, double tol,
                                     int q_order)
{
    if (m < 1) {
        throw std::invalid_argument("modular_covariance_check expects m >= 1");
    }
    if (m == 1) {
        return quasi_periodicity_check(samples, tol, q_order);
    }
    Accumulator acc;
    for (const auto& s : samples) {
        const Complex base = wp_value(m, s.z, s.tau, q_order);
        const Complex j = g.automorphy(s.tau);
        const Complex transformed = std::pow(j, -m) * wp_value(m, s.z / j, g.act(s.tau), q_order);
        acc.add("g=" + g.to_string(), s, transformed, base);
        acc.add("z+1", s, wp_value(m, s.z + 1.0, s.tau, q_order), base);
        acc.add("z+tau", s, wp_value(m, s.z + s.tau, s.tau, q_order), base);
    }
    return finish("wp" + std::to_string(m) + "_covariance_" + g.to_string(), acc, tol, q_order);
}

CheckReport lattice_oracle_check(const std::vector<Sample>& samples, double tol, int q_order)
{
    Accumulator acc;
    for (const auto& s : samples) {
        acc.add("lattice", s, wp_value(2, s.z, s.tau, q_order), lattice_wp2_extrapolated(s.z, s.tau));
    }
    return finish("wp2_lattice_oracle", acc, tol, q_order);
}

}  // namespace qtrace
