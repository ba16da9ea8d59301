#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qtrace/series.hpp"

namespace qtrace {

struct CoefficientDiff {
    std::string monomial;
    std::string lhs;
    std::string rhs;
    double magnitude = 0.0;
};

/// Outcome of a verification routine. Exact checks fill `diffs` in monomial
/// order (the first entry is the first differing coefficient); numeric checks
/// fill `max_deviation`.
struct CheckReport {
    std::string id;
    bool pass = true;
    double max_deviation = 0.0;
    double tolerance = 0.0;
    std::vector<CoefficientDiff> diffs;
    std::vector<std::string> notes;
    nlohmann::json details = nlohmann::json::object();

    nlohmann::json to_json() const;
};

/// Coefficient-wise comparison of two series cut to their common truncation.
CheckReport compare_series(const std::string& id, const MultiSeries& lhs, const MultiSeries& rhs);

}  // namespace qtrace
