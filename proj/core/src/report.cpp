#include "qtrace/report.hpp"

#include <algorithm>
#include <cmath>

namespace qtrace {

nlohmann::json CheckReport::to_json() const
{
    nlohmann::json diff_list = nlohmann::json::array();
    for (const auto& d : diffs) {
        diff_list.push_back({{"monomial", d.monomial}, {"lhs", d.lhs}, {"rhs", d.rhs}, {"magnitude", d.magnitude}});
    }
    nlohmann::json out = {{"id", id},
                          {"pass", pass},
                          {"max_deviation", max_deviation},
                          {"tolerance", tolerance},
                          {"diffs", diff_list},
                          {"notes", notes}};
    if (!details.empty()) {
        out["details"] = details;
    }
    return out;
}

CheckReport compare_series(const std::string& id, const MultiSeries& lhs, const MultiSeries& rhs)
{
    CheckReport report;
    report.id = id;
    auto [a, b] = common_truncation(lhs, rhs);
    const MultiSeries diff = a - b;
    for (const auto& [m, c] : diff.terms()) {
        const double mag = std::abs(c.value());
        report.diffs.push_back({m.to_string(a.vars()), a.coefficient(m).to_string(), b.coefficient(m).to_string(), mag});
        report.max_deviation = std::max(report.max_deviation, mag);
    }
    report.pass = report.diffs.empty();
    std::string trunc_note = "compared below";
    for (std::size_t v = 0; v < a.nvars(); ++v) {
        trunc_note += " " + a.vars()[v] + "^" + (a.trunc(v) ? to_string(*a.trunc(v)) : std::string("inf"));
    }
    report.notes.push_back(trunc_note);
    return report;
}

}  // namespace qtrace
