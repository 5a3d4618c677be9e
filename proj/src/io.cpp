#include "multcover/io.hpp"

#include <cmath>
#include <sstream>
#include <vector>

namespace multcover {

namespace {

struct Factor {
    std::string base; // "", "q", "x", "log", "loglog"
    double exponent = 1.0;
    double value = 1.0; // for plain numbers (base == "")
};

double parse_number(const std::string& text, const char* what) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw DomainError(std::string("cannot parse ") + what + " in '" + text + "'");
    }
    if (pos != text.size())
        throw DomainError(std::string("trailing characters after ") + what + " in '" + text + "'");
    return v;
}

std::vector<Factor> parse_factors(const std::string& text) {
    std::vector<Factor> factors;
    std::stringstream ss(text);
    std::string piece;
    while (std::getline(ss, piece, '*')) {
        if (piece.empty())
            throw DomainError("empty factor in '" + text + "'");
        Factor f;
        const auto caret = piece.find('^');
        std::string base = piece.substr(0, caret == std::string::npos ? piece.size() : caret);
        if (base == "q" || base == "x" || base == "log" || base == "loglog") {
            f.base = base;
            f.exponent = caret == std::string::npos
                             ? 1.0
                             : parse_number(piece.substr(caret + 1), "exponent");
        } else {
            if (caret != std::string::npos)
                throw DomainError("unknown factor base '" + base + "' in '" + text + "'");
            f.value = parse_number(piece, "scale factor");
        }
        factors.push_back(f);
    }
    if (factors.empty())
        throw DomainError("empty function description");
    return factors;
}

bool looks_like_json(const std::string& text) {
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c)))
            continue;
        return c == '{';
    }
    return false;
}

} // namespace

ApproximatingFunction parse_psi(const std::string& text, std::optional<int> d,
                                std::optional<double> s) {
    if (looks_like_json(text)) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw DomainError(std::string("invalid JSON for approximating function: ") + e.what());
        }
        if (j.value("kind", "") != "psi")
            throw DomainError("approximating-function JSON must have \"kind\": \"psi\"");
        return ApproximatingFunction::power_law(j.value("c", 1.0), j.value("a", 0.0),
                                                j.value("b", 0.0));
    }
    if (text.rfind("gap:alpha=", 0) == 0) {
        if (!d || !s)
            throw DomainError("the gap family needs both the ambient dimension and the exponent s");
        const double alpha = parse_number(text.substr(10), "gap parameter");
        const double sigma = *s - static_cast<double>(*d) + 1.0;
        if (!(sigma > 0.0) || !(*s < static_cast<double>(*d)))
            throw OutOfRangeError("the gap family requires s strictly between d-1 and d");
        return ApproximatingFunction::power_law(1.0, (static_cast<double>(*d) - *s + 1.0) / sigma,
                                                alpha / sigma);
    }
    double c = 1.0, a = 0.0, b = 0.0;
    for (const Factor& f : parse_factors(text)) {
        if (f.base == "q")
            a -= f.exponent;
        else if (f.base == "log")
            b -= f.exponent;
        else if (f.base.empty())
            c *= f.value;
        else
            throw DomainError("factor '" + f.base + "' not allowed in an approximating function");
    }
    return ApproximatingFunction::power_law(c, a, b);
}

DimensionFunction parse_dimension_function(const std::string& text) {
    if (looks_like_json(text)) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw DomainError(std::string("invalid JSON for dimension function: ") + e.what());
        }
        if (j.value("kind", "") != "f")
            throw DomainError("dimension-function JSON must have \"kind\": \"f\"");
        if (!j.contains("s"))
            throw DomainError("dimension-function JSON needs the leading power \"s\"");
        return DimensionFunction::power_log(j["s"].get<double>(), j.value("alpha", 0.0),
                                            j.value("beta", 0.0));
    }
    std::optional<double> s;
    double alpha = 0.0, beta = 0.0;
    for (const Factor& f : parse_factors(text)) {
        if (f.base == "x") {
            if (s)
                throw DomainError("duplicate power factor in '" + text + "'");
            s = f.exponent;
        } else if (f.base == "log") {
            alpha += f.exponent;
        } else if (f.base == "loglog") {
            beta += f.exponent;
        } else if (f.base.empty()) {
            if (f.value != 1.0)
                throw DomainError("dimension functions carry no scale factor; drop '" +
                                  std::to_string(f.value) + "'");
        } else {
            throw DomainError("factor '" + f.base + "' not allowed in a dimension function");
        }
    }
    if (!s)
        throw DomainError("dimension function needs a power factor like x^1.5");
    return DimensionFunction::power_log(*s, alpha, beta);
}

nlohmann::json psi_to_json(const ApproximatingFunction& psi) {
    if (!psi.symbolic())
        throw DomainError("psi_to_json: raw callables have no symbolic form");
    return nlohmann::json{{"kind", "psi"}, {"c", psi.scale()}, {"a", psi.power()},
                          {"b", psi.log_power()}};
}

nlohmann::json dimension_function_to_json(const DimensionFunction& f) {
    return nlohmann::json{{"kind", "f"}, {"s", f.s()}, {"alpha", f.alpha()}, {"beta", f.beta()}};
}

nlohmann::json verdict_to_json(const Verdict& verdict) {
    nlohmann::json series = nlohmann::json::array();
    for (const auto& entry : verdict.series) {
        series.push_back({{"name", entry.name},
                          {"e", entry.term.e},
                          {"h", entry.term.h},
                          {"h2", entry.term.h2},
                          {"classification", to_string(entry.classification.verdict)},
                          {"mode", entry.classification.mode == ClassificationMode::exact
                                       ? "exact"
                                       : "heuristic"},
                          {"note", entry.classification.note}});
    }
    nlohmann::json j{{"measure_kind", to_string(verdict.kind)},
                     {"value", to_string(verdict.value)},
                     {"provenance", verdict.provenance},
                     {"series", series}};
    if (std::isfinite(verdict.dim)) {
        j["dim_H"] = verdict.dim;
        j["dim_exact"] = verdict.dim_exact;
    } else {
        j["dim_H"] = nullptr;
    }
    if (verdict.critical_exponent)
        j["critical_exponent"] = *verdict.critical_exponent;
    if (!verdict.note.empty())
        j["note"] = verdict.note;
    return j;
}

} // namespace multcover
