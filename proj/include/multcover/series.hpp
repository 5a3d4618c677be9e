#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "multcover/errors.hpp"
#include "multcover/functions.hpp"

namespace multcover {

// A positive series term of the shape
//   scale * q^e * (log q)^h * (log log q)^h2,
// the algebra in which all the comparison series of this library live.
struct PowerLogTerm {
    double e = 0.0;
    double h = 0.0;
    double h2 = 0.0;
    double log_scale = 0.0;    // natural log of the positive scale factor
    bool depth_overflow = false; // a deeper iterated-log factor was dropped
    double dropped_h3 = 0.0;     // its exponent, kept for boundary handling

    // Numeric value at integer q (clamped to q >= 3 so both logs are
    // positive; the finite prefix never affects convergence).
    [[nodiscard]] long double evaluate(std::uint64_t q) const;
};

enum class Convergence { convergent, divergent, unknown };
enum class ClassificationMode { exact, heuristic };

struct SeriesClassification {
    Convergence verdict = Convergence::unknown;
    ClassificationMode mode = ClassificationMode::exact;
    std::string note;
};

// Exact convergence test for sum over q of a power-log term, by iterated
// comparison at the critical exponent -1 (generalized Bertrand rules).
// Exact except when a dropped deeper log factor decides the triple boundary,
// which is reported as heuristic.
SeriesClassification classify_powerlog(const PowerLogTerm& term);

struct NumericOptions {
    int n_min = 8;              // condensation exponents 2^n
    int n_max = 44;
    std::uint64_t partial_q = 1ull << 14; // partial-sum cross-check horizon
    double dead_zone = 0.02;    // indecision margin on fitted exponents
};

// Heuristic convergence test for an arbitrary positive term function:
// geometric condensation y_n = log2(2^n T(2^n)) fitted against the basis
// {1, n, log2(n ln 2), log2(log(n ln 2))}, decided level by level with dead
// zones, cross-checked against partial-sum increments.  May return unknown.
SeriesClassification classify_numeric(const std::function<long double(std::uint64_t)>& term,
                                      NumericOptions opts = {});

// --- Series builders -------------------------------------------------------
// All builders require a symbolic psi and represent the *term* of the named
// comparison series as a power-log term in q.

// sum psi(q) (log q)^(d-1): governs the d-dimensional volume of the limsup
// set (also its doubly-metric analogue).
PowerLogTerm volume_series_term(const ApproximatingFunction& psi, int d);

// sum q^(d-s) psi(q)^(s-d+1): the unweighted critical sum for the
// s-dimensional measure.
PowerLogTerm critical_series_term(const ApproximatingFunction& psi, double s, int d);

// sum q^(d-s) psi(q)^(s-d+1) (log q)^(d-2): the log-weighted critical sum
// whose convergence forces zero s-dimensional measure.
PowerLogTerm weighted_critical_series_term(const ApproximatingFunction& psi, double s, int d);

// sum q^d psi(q)^(1-d) f(psi(q)/q): the cover-cost series for a general
// dimension function f.
PowerLogTerm hausdorff_series_term(const ApproximatingFunction& psi, const DimensionFunction& f, int d);

// sum q g(psi(q)/q) with g the sliced radial profile of f: algebraically
// identical to hausdorff_series_term, built through the slicing route.
PowerLogTerm radial_profile_series_term(const ApproximatingFunction& psi, const DimensionFunction& f,
                                        int d);

// m-variable analogues (q ranges over integer vectors reduced radially).
PowerLogTerm multivariable_volume_series_term(const ApproximatingFunction& psi, int d, int m);
PowerLogTerm multivariable_hausdorff_series_term(const ApproximatingFunction& psi,
                                                 const DimensionFunction& f, int d, int m);

// --- Verdict engine --------------------------------------------------------

enum class SetupMode { homogeneous, inhomogeneous, doubly, multivariable };

enum class MeasureKind { lebesgue_d, hausdorff_f, hausdorff_s, doubly_F };
enum class MeasureValue {
    zero,
    one,
    infinite_value,
    conjectural_one,
    conjectural_infinite,
    out_of_range_infinite,
    out_of_range_zero,
    undetermined,
};

std::string to_string(MeasureKind kind);
std::string to_string(MeasureValue value);
std::string to_string(Convergence c);

struct SeriesEntry {
    std::string name;
    PowerLogTerm term;
    SeriesClassification classification;
};

struct Verdict {
    MeasureKind kind = MeasureKind::lebesgue_d;
    MeasureValue value = MeasureValue::undetermined;
    std::string provenance; // which dichotomy produced the value, and why
    std::string note;
    double dim = std::numeric_limits<double>::quiet_NaN();
    bool dim_exact = false;
    std::optional<double> critical_exponent; // measure at this exponent is infinite
    std::vector<SeriesEntry> series;
};

struct VerdictRequest {
    SetupMode mode = SetupMode::homogeneous;
    int d = 2;
    int m = 1; // number of approximation variables (multivariable mode)
    std::optional<ApproximatingFunction> psi;
    std::optional<double> s;              // Hausdorff exponent mode
    std::optional<DimensionFunction> f;   // general dimension-function mode
};

// Full dichotomy dispatch: classifies the governing series and maps the
// outcome (together with monotonicity and setup) to a measure value with an
// explicit provenance string.  Throws OutOfRangeError for exponents where the
// question is ill-posed (s == d) and DomainError for unmet hypotheses.
Verdict decide_measure(const VerdictRequest& request);

enum class DimensionSetup { single, doubly };

struct DimensionResult {
    double value = 0.0;
    bool exact = false;
    double tau = 0.0;
    std::string note;
};

// Hausdorff dimension of the limsup set from the lower order tau of 1/psi:
// full dimension when tau <= 1, else the hyperbola-cover formula.
DimensionResult hausdorff_dimension(const ApproximatingFunction& psi, int d,
                                    DimensionSetup setup = DimensionSetup::single);

} // namespace multcover
