#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "multcover/errors.hpp"
#include "multcover/functions.hpp"
#include "multcover/series.hpp"

namespace multcover {

// Parse an approximating-function description:
//   shorthand  "q^-2", "q^-1.5*log^-1", "0.5*q^-3", "1"
//   gap family "gap:alpha=1.5"  (needs the ambient d and exponent s context)
//   JSON       {"kind":"psi","c":1,"a":2,"b":0}
ApproximatingFunction parse_psi(const std::string& text, std::optional<int> d = std::nullopt,
                                std::optional<double> s = std::nullopt);

// Parse a dimension-function description:
//   shorthand  "x^1.6", "x^1.5*log^1", "x^1.5*log^2*loglog^-1"
//   JSON       {"kind":"f","s":1.6,"alpha":0,"beta":0}
DimensionFunction parse_dimension_function(const std::string& text);

// Canonical JSON forms (round-trip with the parsers above).
nlohmann::json psi_to_json(const ApproximatingFunction& psi);
nlohmann::json dimension_function_to_json(const DimensionFunction& f);
nlohmann::json verdict_to_json(const Verdict& verdict);

} // namespace multcover
