#include "qtrace/series_json.hpp"

#include <stdexcept>

namespace qtrace {

using nlohmann::json;

namespace {

json pi_term_to_json(int p, const GaussRational& c)
{
    return json{{"pi_pow", p}, {"re", to_string(c.re)}, {"im", to_string(c.im)}};
}

Rational rational_field(const json& j)
{
    if (j.is_string()) {
        return parse_rational(j.get<std::string>());
    }
    if (j.is_number_integer()) {
        return Rational(j.get<long>());
    }
    throw std::invalid_argument("expected a rational string, got " + j.dump());
}

json trunc_value(const std::optional<Rational>& t) { return t ? json(to_string(*t)) : json(nullptr); }

std::optional<Rational> parse_trunc(const json& j)
{
    if (j.is_null()) {
        return std::nullopt;
    }
    return rational_field(j);
}

}  // namespace

json scalar_to_json(const Scalar& s)
{
    if (!s.is_exact()) {
        const Complex v = s.value();
        return json{{"pi_pow", 0}, {"re", v.real()}, {"im", v.imag()}};
    }
    const auto& terms = s.pi_terms();
    if (terms.empty()) {
        return pi_term_to_json(0, {0, 0});
    }
    if (terms.size() == 1) {
        return pi_term_to_json(terms.begin()->first, terms.begin()->second);
    }
    json arr = json::array();
    for (const auto& [p, c] : terms) {
        arr.push_back(pi_term_to_json(p, c));
    }
    return arr;
}

Scalar scalar_from_json(const json& j)
{
    if (j.is_array()) {
        Scalar out;
        for (const auto& t : j) {
            out += scalar_from_json(t);
        }
        return out;
    }
    if (!j.is_object() || !j.contains("re")) {
        throw std::invalid_argument("malformed coefficient " + j.dump());
    }
    const int p = j.value("pi_pow", 0);
    const json& re = j.at("re");
    const json im = j.value("im", json("0"));
    if (re.is_number_float() || im.is_number_float()) {
        if (p != 0) {
            throw std::invalid_argument("numeric coefficients must use pi_pow 0");
        }
        return Scalar(Complex{re.get<double>(), im.get<double>()});
    }
    return Scalar::pi_power(p, {rational_field(re), rational_field(im)});
}

json series_to_json(const MultiSeries& s)
{
    json out;
    out["kind"] = s.kind() == Scalar::Kind::exact ? "exact" : "numeric";
    out["max_log"] = s.max_logpower();
    json terms = json::array();
    if (s.nvars() == 1) {
        out["var"] = s.vars().front();
        out["trunc"] = trunc_value(s.trunc(0));
        for (const auto& [m, c] : s.terms()) {
            terms.push_back(json{{"exp", to_string(m.exps[0])}, {"log", m.logs[0]}, {"coef", scalar_to_json(c)}});
        }
    } else {
        out["vars"] = s.vars();
        json trunc = json::object();
        json integral = json::array();
        for (std::size_t v = 0; v < s.nvars(); ++v) {
            trunc[s.vars()[v]] = trunc_value(s.trunc(v));
            if (s.integral(v)) {
                integral.push_back(s.vars()[v]);
            }
        }
        out["trunc"] = trunc;
        out["integral"] = integral;
        for (const auto& [m, c] : s.terms()) {
            json exps = json::array();
            for (const auto& e : m.exps) {
                exps.push_back(to_string(e));
            }
            terms.push_back(json{{"exp", exps}, {"log", m.logs}, {"coef", scalar_to_json(c)}});
        }
    }
    out["terms"] = terms;
    return out;
}

MultiSeries series_from_json(const json& j)
{
    const auto kind = j.value("kind", std::string("exact")) == "numeric" ? Scalar::Kind::numeric : Scalar::Kind::exact;
    if (j.contains("var")) {
        MultiSeries s({j.at("var").get<std::string>()}, kind);
        s.set_max_logpower(j.value("max_log", SeriesDefaults::max_logpower));
        if (auto t = parse_trunc(j.value("trunc", json(nullptr)))) {
            s.truncate(0, *t);
        }
        for (const auto& t : j.at("terms")) {
            s.add_term(mono(rational_field(t.at("exp")), t.value("log", 0)), scalar_from_json(t.at("coef")));
        }
        return s;
    }
    const auto vars = j.at("vars").get<std::vector<std::string>>();
    MultiSeries s(vars, kind);
    s.set_max_logpower(j.value("max_log", SeriesDefaults::max_logpower));
    if (j.contains("trunc")) {
        for (std::size_t v = 0; v < vars.size(); ++v) {
            if (auto t = parse_trunc(j.at("trunc").value(vars[v], json(nullptr)))) {
                s.truncate(v, *t);
            }
        }
    }
    for (const auto& name : j.value("integral", json::array())) {
        s.set_integral(s.var_index(name.get<std::string>()));
    }
    for (const auto& t : j.at("terms")) {
        Monomial m(vars.size());
        const auto& exps = t.at("exp");
        if (exps.size() != vars.size()) {
            throw std::invalid_argument("term arity does not match variables");
        }
        for (std::size_t v = 0; v < vars.size(); ++v) {
            m.exps[v] = rational_field(exps[v]);
            m.logs[v] = t.contains("log") ? t.at("log").at(v).get<int>() : 0;
        }
        s.add_term(m, scalar_from_json(t.at("coef")));
    }
    return s;
}

}  // namespace qtrace
