#pragma once

#include <nlohmann/json.hpp>

#include "qtrace/log_series.hpp"
#include "qtrace/scalar.hpp"
#include "qtrace/series.hpp"

namespace qtrace {

/// Exact coefficients serialize as {"pi_pow": p, "re": "a/b", "im": "c/d"}
/// (value (re + i im) pi^p), or an array of such objects when several powers
/// of pi occur. Numeric coefficients use JSON numbers for re and im.
nlohmann::json scalar_to_json(const Scalar& s);
Scalar scalar_from_json(const nlohmann::json& j);

/// One-variable series use {"var", "trunc", "terms": [{"exp", "log", "coef"}]};
/// several variables use {"vars", "trunc": {...}, "terms": [{"exp": [...], "log": [...], "coef"}]}.
/// A missing truncation order is written as null.
nlohmann::json series_to_json(const MultiSeries& s);
MultiSeries series_from_json(const nlohmann::json& j);

inline nlohmann::json series_to_json(const LogSeries& s) { return series_to_json(s.series()); }

}  // namespace qtrace
