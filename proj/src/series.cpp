#include "multcover/series.hpp"

#include <algorithm>
#include <cmath>

#include "multcover/numeric.hpp"

namespace multcover {

long double PowerLogTerm::evaluate(std::uint64_t q) const {
    const long double qe = static_cast<long double>(std::max<std::uint64_t>(q, 3));
    const long double lq = std::log(qe);
    const long double llq = std::log(lq);
    return std::exp(static_cast<long double>(log_scale) + e * lq + h * std::log(lq) +
                    h2 * std::log(llq));
}

SeriesClassification classify_powerlog(const PowerLogTerm& term) {
    SeriesClassification cls;
    cls.mode = ClassificationMode::exact;
    auto decide = [&](Convergence v, std::string note) {
        cls.verdict = v;
        cls.note = std::move(note);
        return cls;
    };
    if (term.e < -1.0)
        return decide(Convergence::convergent, "power exponent below -1");
    if (term.e > -1.0)
        return decide(Convergence::divergent, "power exponent above -1");
    if (term.h < -1.0)
        return decide(Convergence::convergent, "critical power, log exponent below -1");
    if (term.h > -1.0)
        return decide(Convergence::divergent, "critical power, log exponent above -1");
    if (term.h2 < -1.0)
        return decide(Convergence::convergent, "critical power and log, iterated-log exponent below -1");
    if (term.h2 > -1.0)
        return decide(Convergence::divergent, "critical power and log, iterated-log exponent above -1");
    // (e, h, h2) == (-1, -1, -1): the next iterated-log level decides.
    if (term.depth_overflow) {
        cls.mode = ClassificationMode::heuristic;
        if (term.dropped_h3 < -1.0)
            return decide(Convergence::convergent,
                          "triple critical boundary decided by a dropped deeper log factor");
        return decide(Convergence::divergent,
                      "triple critical boundary decided by a dropped deeper log factor");
    }
    return decide(Convergence::divergent, "triple critical boundary with no deeper factor: divergent");
}

SeriesClassification classify_numeric(const std::function<long double(std::uint64_t)>& term,
                                      NumericOptions opts) {
    if (!term)
        throw DomainError("classify_numeric: empty term function");
    if (opts.n_max - opts.n_min < 8 || opts.n_min < 3 || opts.n_max > 62)
        throw DomainError("classify_numeric: condensation range must give >= 8 points within [3, 62]");
    SeriesClassification cls;
    cls.mode = ClassificationMode::heuristic;

    // Geometric condensation: y_n = log2(2^n T(2^n)) is, for power-log terms,
    // exactly affine in the basis {1, n, log2(n ln 2), log2(log(n ln 2))}.
    std::vector<std::vector<long double>> rows;
    std::vector<long double> ys;
    for (int n = opts.n_min; n <= opts.n_max; ++n) {
        const std::uint64_t q = 1ull << n;
        const long double t = term(q);
        if (!(t > 0.0L) || std::isinf(t)) {
            cls.verdict = Convergence::unknown;
            cls.note = "term not positive/finite at q = 2^" + std::to_string(n);
            return cls;
        }
        const long double u = std::log2(t) + n;
        const long double nl = static_cast<long double>(n) * 0.6931471805599453094L;
        rows.push_back({1.0L, static_cast<long double>(n), std::log2(nl), std::log2(std::log(nl))});
        ys.push_back(u);
    }
    const auto coeffs = fit_linear_model(rows, ys);
    const double growth = static_cast<double>(coeffs[1]); // estimates e + 1
    const double log_level = static_cast<double>(coeffs[2]); // estimates h
    const double loglog_level = static_cast<double>(coeffs[3]); // estimates h2

    // Partial-sum cross-check: increments of S(Q), S(2Q), S(4Q).
    Accumulator acc;
    long double s1 = 0.0L, s2 = 0.0L;
    for (std::uint64_t q = 3; q <= 4 * opts.partial_q; ++q) {
        acc.add(term(q));
        if (q == opts.partial_q)
            s1 = acc.value();
        if (q == 2 * opts.partial_q)
            s2 = acc.value();
    }
    const long double s3 = acc.value();
    const long double d1 = s2 - s1, d2 = s3 - s2;
    double increment_growth = 0.0;
    bool increments_ok = d1 > 0.0L && d2 > 0.0L;
    if (increments_ok)
        increment_growth = static_cast<double>(std::log2(d2 / d1));

    const double dz = opts.dead_zone;
    auto decide = [&](Convergence v, const std::string& why) {
        cls.verdict = v;
        cls.note = why;
        return cls;
    };
    if (growth > dz || growth < -dz) {
        const Convergence v = growth < 0.0 ? Convergence::convergent : Convergence::divergent;
        // Require the partial-sum trend not to contradict a decisive fit.
        if (increments_ok && std::fabs(growth) > 0.5 && std::fabs(increment_growth) > 0.35 &&
            (increment_growth < 0.0) != (growth < 0.0)) {
            return decide(Convergence::unknown, "condensation fit and partial-sum trend disagree");
        }
        return decide(v, "condensation growth exponent " + std::to_string(growth));
    }
    if (log_level > -1.0 + dz)
        return decide(Convergence::divergent, "critical power; fitted log level " + std::to_string(log_level));
    if (log_level < -1.0 - dz)
        return decide(Convergence::convergent, "critical power; fitted log level " + std::to_string(log_level));
    if (loglog_level > -1.0 + dz)
        return decide(Convergence::divergent,
                      "critical power and log; fitted iterated-log level " + std::to_string(loglog_level));
    if (loglog_level < -1.0 - dz)
        return decide(Convergence::convergent,
                      "critical power and log; fitted iterated-log level " + std::to_string(loglog_level));
    return decide(Convergence::unknown, "all fitted levels inside the indecision margin");
}

namespace {

void require_symbolic(const ApproximatingFunction& psi, const char* who) {
    if (!psi.symbolic())
        throw DomainError(std::string(who) + ": requires a symbolic approximating function "
                                             "(use the numeric classifier for raw callables)");
}

// Shared composition: base term q^(e0) (log q)^(h0) times psi^p times
// f(psi(q)/q) when f is provided.
PowerLogTerm compose(const ApproximatingFunction& psi, double e0, double h0, double psi_power,
                     const DimensionFunction* f, const char* who) {
    require_symbolic(psi, who);
    const double a = psi.power(), b = psi.log_power(), c = psi.scale();
    PowerLogTerm t;
    t.e = e0 - a * psi_power;
    t.h = h0 - b * psi_power;
    t.log_scale = psi_power * std::log(c);
    if (f == nullptr)
        return t;
    // x(q) = psi(q)/q = c q^-(a+1) (log q)^-b; f(x) = x^s L^alpha (log L)^beta
    // with L = log(1/x) ~ (a+1) log q  (a+1 > 0)
    //                   ~ b log log q  (a+1 == 0, b > 0)
    //                   ~ constant     (a+1 == 0, b == 0).
    const double A = a + 1.0;
    if (A < 0.0)
        throw DomainError(std::string(who) + ": psi(q)/q must tend to 0 (power >= -1 required)");
    const double s = f->s(), alpha = f->alpha(), beta = f->beta();
    t.e += -s * A;
    t.h += -s * b;
    t.log_scale += s * std::log(c);
    if (alpha != 0.0 || beta != 0.0) {
        if (A > 0.0) {
            t.h += alpha;
            t.log_scale += alpha * std::log(A);
            t.h2 += beta; // log L ~ log log q
        } else if (b > 0.0) {
            t.h2 += alpha;
            t.log_scale += alpha * std::log(b);
            if (beta != 0.0) {
                t.depth_overflow = true; // log L ~ log log log q: one level too deep
                t.dropped_h3 = beta;
            }
        } else {
            // x(q) is eventually the constant c: fold f's log factors into the scale.
            if (!(c < 1.0))
                throw DomainError(std::string(who) +
                                  ": constant psi(q)/q >= 1 leaves the dimension function undefined");
            const double L = std::max(std::log(1.0 / c), 2.0);
            t.log_scale += alpha * std::log(L) + beta * std::log(std::log(L));
        }
    }
    return t;
}

} // namespace

PowerLogTerm volume_series_term(const ApproximatingFunction& psi, int d) {
    if (d < 2)
        throw DomainError("volume_series_term: d must be >= 2");
    return compose(psi, 0.0, static_cast<double>(d - 1), 1.0, nullptr, "volume_series_term");
}

PowerLogTerm critical_series_term(const ApproximatingFunction& psi, double s, int d) {
    if (d < 2)
        throw DomainError("critical_series_term: d must be >= 2");
    const double sigma = s - static_cast<double>(d) + 1.0;
    return compose(psi, static_cast<double>(d) - s, 0.0, sigma, nullptr, "critical_series_term");
}

PowerLogTerm weighted_critical_series_term(const ApproximatingFunction& psi, double s, int d) {
    if (d < 2)
        throw DomainError("weighted_critical_series_term: d must be >= 2");
    const double sigma = s - static_cast<double>(d) + 1.0;
    return compose(psi, static_cast<double>(d) - s, static_cast<double>(d - 2), sigma, nullptr,
                   "weighted_critical_series_term");
}

PowerLogTerm hausdorff_series_term(const ApproximatingFunction& psi, const DimensionFunction& f,
                                   int d) {
    if (d < 2)
        throw DomainError("hausdorff_series_term: d must be >= 2");
    return compose(psi, static_cast<double>(d), 0.0, 1.0 - static_cast<double>(d), &f,
                   "hausdorff_series_term");
}

PowerLogTerm radial_profile_series_term(const ApproximatingFunction& psi, const DimensionFunction& f,
                                        int d) {
    if (d < 2)
        throw DomainError("radial_profile_series_term: d must be >= 2");
    // sum q * g(psi(q)/q) with g the sliced profile (leading power s-(d-1)).
    const SlicedDimensionFunction sliced(f, d);
    const DimensionFunction g = sliced.symbolic_profile();
    return compose(psi, 1.0, 0.0, 0.0, &g, "radial_profile_series_term");
}

PowerLogTerm multivariable_volume_series_term(const ApproximatingFunction& psi, int d, int m) {
    if (d < 2 || m < 1)
        throw DomainError("multivariable_volume_series_term: need d >= 2, m >= 1");
    return compose(psi, static_cast<double>(m - 1), static_cast<double>(d - 1),
                   static_cast<double>(m), nullptr, "multivariable_volume_series_term");
}

PowerLogTerm multivariable_hausdorff_series_term(const ApproximatingFunction& psi,
                                                 const DimensionFunction& f, int d, int m) {
    if (d < 2 || m < 1)
        throw DomainError("multivariable_hausdorff_series_term: need d >= 2, m >= 1");
    const double md = static_cast<double>(m) * d;
    return compose(psi, static_cast<double>(m - 1) + md, 0.0, 1.0 - md, &f,
                   "multivariable_hausdorff_series_term");
}

std::string to_string(MeasureKind kind) {
    switch (kind) {
    case MeasureKind::lebesgue_d: return "Lebesgue_d";
    case MeasureKind::hausdorff_f: return "Hausdorff_f";
    case MeasureKind::hausdorff_s: return "Hausdorff_s";
    case MeasureKind::doubly_F: return "Doubly_F";
    }
    return "?";
}

std::string to_string(MeasureValue value) {
    switch (value) {
    case MeasureValue::zero: return "Zero";
    case MeasureValue::one: return "One";
    case MeasureValue::infinite_value: return "Infinite";
    case MeasureValue::conjectural_one: return "Conjectural_One";
    case MeasureValue::conjectural_infinite: return "Conjectural_Infinite";
    case MeasureValue::out_of_range_infinite: return "OutOfRange_Infinite";
    case MeasureValue::out_of_range_zero: return "OutOfRange_Zero";
    case MeasureValue::undetermined: return "Undetermined";
    }
    return "?";
}

std::string to_string(Convergence c) {
    switch (c) {
    case Convergence::convergent: return "Convergent";
    case Convergence::divergent: return "Divergent";
    case Convergence::unknown: return "Unknown";
    }
    return "?";
}

namespace {

SeriesClassification classify_series(const ApproximatingFunction& psi, const PowerLogTerm& term,
                                     const std::function<long double(std::uint64_t)>& raw_term) {
    if (psi.symbolic())
        return classify_powerlog(term);
    return classify_numeric(raw_term);
}

// Literal term functions for the numeric pipeline (raw psi).
std::function<long double(std::uint64_t)> volume_term_fn(const ApproximatingFunction& psi, int d) {
    return [psi, d](std::uint64_t q) {
        const long double lq = std::log(static_cast<long double>(std::max<std::uint64_t>(q, 3)));
        return static_cast<long double>(psi(q)) * std::pow(lq, static_cast<long double>(d - 1));
    };
}

std::function<long double(std::uint64_t)> hausdorff_term_fn(const ApproximatingFunction& psi,
                                                            const DimensionFunction& f, int d) {
    return [psi, f, d](std::uint64_t q) {
        const long double psiq = psi(q);
        const long double x = std::min(1.0L, psiq / static_cast<long double>(q));
        long double v = f.eval(x);
        v *= std::pow(static_cast<long double>(q), static_cast<long double>(d));
        v *= std::pow(psiq, static_cast<long double>(1 - d));
        return v;
    };
}

double dimension_from_tau(double tau, int ambient) {
    if (tau <= 1.0)
        return static_cast<double>(ambient);
    return static_cast<double>(ambient) + (1.0 - tau) / (1.0 + tau);
}

} // namespace

DimensionResult hausdorff_dimension(const ApproximatingFunction& psi, int d, DimensionSetup setup) {
    if (d < 2)
        throw DomainError("hausdorff_dimension: d must be >= 2");
    const TauEstimate tau = lower_order_tau(psi);
    DimensionResult res;
    res.tau = tau.value;
    res.exact = tau.exact;
    const int ambient = setup == DimensionSetup::doubly ? 2 * d : d;
    res.value = dimension_from_tau(tau.value, ambient);
    if (tau.value <= 1.0)
        res.note = "slow approximation speed (tau <= 1): the limsup set has full dimension";
    else
        res.note = "dimension from the hyperbola-cover formula at tau = " + std::to_string(tau.value) +
                   (tau.exact ? " (exact)" : " (sampled estimate)");
    return res;
}

Verdict decide_measure(const VerdictRequest& request) {
    const int d = request.d;
    if (d < 2)
        throw DomainError("decide_measure: d must be >= 2");
    if (!request.psi)
        throw DomainError("decide_measure: an approximating function is required");
    const ApproximatingFunction& psi = *request.psi;
    const int m = request.mode == SetupMode::multivariable ? request.m : 1;
    if (request.mode == SetupMode::multivariable && m < 2)
        throw DomainError("decide_measure: multivariable mode needs m >= 2");
    if (request.mode != SetupMode::multivariable && request.m > 1)
        throw DomainError("decide_measure: m > 1 requires multivariable mode");
    if (request.s && request.f)
        throw DomainError("decide_measure: give either a Hausdorff exponent or a dimension function, not both");

    Verdict verdict;
    const bool monotone = psi.monotone_nonincreasing();

    // Ambient dimension of the measured space.
    const int ambient = (request.mode == SetupMode::doubly ? 2 * d : m * d);

    // Dimension report (no formula implemented in the multivariable setup).
    if (request.mode != SetupMode::multivariable) {
        const DimensionResult dim = hausdorff_dimension(
            psi, d, request.mode == SetupMode::doubly ? DimensionSetup::doubly : DimensionSetup::single);
        verdict.dim = dim.value;
        verdict.dim_exact = dim.exact;
        if (dim.tau > 1.0)
            verdict.critical_exponent = dim.value;
    }

    // ---------------- Lebesgue-type verdicts ----------------
    if (!request.s && !request.f) {
        verdict.kind = MeasureKind::lebesgue_d;
        PowerLogTerm term;
        std::function<long double(std::uint64_t)> raw_fn;
        std::string series_name;
        if (request.mode == SetupMode::multivariable) {
            series_name = "multivariable_volume_sum";
            if (psi.symbolic())
                term = multivariable_volume_series_term(psi, d, m);
            raw_fn = [psi, d, m](std::uint64_t q) {
                const long double lq = std::log(static_cast<long double>(std::max<std::uint64_t>(q, 3)));
                return std::pow(static_cast<long double>(q), static_cast<long double>(m - 1)) *
                       std::pow(static_cast<long double>(psi(q)), static_cast<long double>(m)) *
                       std::pow(lq, static_cast<long double>(d - 1));
            };
        } else {
            series_name = "volume_sum";
            if (psi.symbolic())
                term = volume_series_term(psi, d);
            raw_fn = volume_term_fn(psi, d);
        }
        const SeriesClassification cls = classify_series(psi, term, raw_fn);
        verdict.series.push_back({series_name, term, cls});
        if (cls.verdict == Convergence::unknown) {
            verdict.value = MeasureValue::undetermined;
            verdict.provenance = "numeric classification inconclusive";
            return verdict;
        }
        if (cls.verdict == Convergence::convergent) {
            verdict.value = MeasureValue::zero;
            verdict.provenance = "convergent volume sum: Borel-Cantelli gives a null limsup set";
            return verdict;
        }
        switch (request.mode) {
        case SetupMode::homogeneous:
            verdict.value = MeasureValue::one;
            verdict.provenance = monotone
                                     ? "divergent volume sum with monotone speed: full measure"
                                     : "divergent volume sum: full measure (monotonicity removable in "
                                       "dimension >= 2)";
            break;
        case SetupMode::inhomogeneous:
            verdict.value = MeasureValue::conjectural_one;
            verdict.provenance = "divergent volume sum with a shift: full measure expected but known "
                                 "only conjecturally";
            break;
        case SetupMode::doubly:
            verdict.value = MeasureValue::one;
            verdict.provenance = "divergent volume sum, doubly metric: full measure with no "
                                 "monotonicity assumption";
            break;
        case SetupMode::multivariable:
            if (monotone) {
                verdict.value = MeasureValue::conjectural_one;
                verdict.provenance = "divergent multivariable volume sum with monotone speed: full "
                                     "measure expected but known only conjecturally";
            } else {
                verdict.value = MeasureValue::undetermined;
                verdict.provenance = "divergent multivariable volume sum without monotonicity: no "
                                     "statement available";
            }
            break;
        }
        verdict.note = ambient != d ? "ambient dimension " + std::to_string(ambient) : "";
        return verdict;
    }

    // ---------------- Hausdorff-type verdicts ----------------
    DimensionFunction f = request.f ? *request.f : DimensionFunction::power(request.s.value());
    const double s = f.s();
    const double lo = static_cast<double>(m * d) - 1.0;
    const double hi = static_cast<double>(m * d);
    verdict.kind = request.mode == SetupMode::doubly ? MeasureKind::doubly_F
                   : request.f                       ? MeasureKind::hausdorff_f
                                                     : MeasureKind::hausdorff_s;
    if (s == hi && f.pure_power())
        throw OutOfRangeError("exponent equals the ambient dimension: the measure reduces to Lebesgue "
                              "measure there; use Lebesgue mode instead");
    if (s <= lo) {
        verdict.value = MeasureValue::out_of_range_infinite;
        verdict.provenance = "exponent at most ambient-1: the limsup set contains hyperplane pieces of "
                             "that dimension, so the measure is infinite for every approximating function";
        return verdict;
    }
    if (s > hi) {
        verdict.value = MeasureValue::out_of_range_zero;
        verdict.provenance = "exponent above the ambient dimension: every subset of the cube is null";
        return verdict;
    }
    // Hypotheses on f (pure powers in range satisfy both automatically).
    // The quasi-power-law check also rejects s == ambient for non-pure f.
    const ConditionIResult qpl = check_quasi_power_law(f, m * d);
    if (!qpl.holds)
        throw DomainError("decide_measure: the dimension function is not quasi-power-law comparable");
    verdict.note = "quasi-power-law constant ~= " + std::to_string(qpl.constant);
    const ConditionIIResult mono = check_slice_monotonicity(f, m * d);
    if (!mono.holds) {
        std::string msg = "decide_measure: the dimension function violates slice monotonicity";
        if (mono.witness)
            msg += " (witness x = " + std::to_string(mono.witness->first) +
                   ", y = " + std::to_string(mono.witness->second) + ")";
        throw DomainError(msg);
    }

    PowerLogTerm main_term;
    std::function<long double(std::uint64_t)> raw_fn;
    std::string main_name;
    if (request.mode == SetupMode::multivariable) {
        main_name = "multivariable_hausdorff_sum";
        if (psi.symbolic())
            main_term = multivariable_hausdorff_series_term(psi, f, d, m);
        raw_fn = [psi, f, d, m](std::uint64_t q) {
            const long double psiq = psi(q);
            const long double x = std::min(1.0L, psiq / static_cast<long double>(q));
            return std::pow(static_cast<long double>(q), static_cast<long double>(m - 1)) *
                   std::pow(static_cast<long double>(q), static_cast<long double>(m * d)) *
                   std::pow(psiq, static_cast<long double>(1 - m * d)) * f.eval(x);
        };
    } else {
        main_name = "hausdorff_sum";
        if (psi.symbolic())
            main_term = hausdorff_series_term(psi, f, d);
        raw_fn = hausdorff_term_fn(psi, f, d);
    }
    const SeriesClassification cls = classify_series(psi, main_term, raw_fn);
    verdict.series.push_back({main_name, main_term, cls});

    // Companion diagnostics for the exponent measure (symbolic psi only).
    if (psi.symbolic() && request.mode != SetupMode::multivariable && f.pure_power()) {
        const PowerLogTerm wc = weighted_critical_series_term(psi, s, d);
        verdict.series.push_back({"weighted_critical_sum", wc, classify_powerlog(wc)});
        const PowerLogTerm uc = critical_series_term(psi, s, d);
        verdict.series.push_back({"critical_sum", uc, classify_powerlog(uc)});
    }
    if (psi.symbolic() && request.mode != SetupMode::multivariable) {
        const PowerLogTerm rp = radial_profile_series_term(psi, f, d);
        verdict.series.push_back({"radial_profile_sum", rp, classify_powerlog(rp)});
    }

    if (cls.verdict == Convergence::unknown) {
        verdict.value = MeasureValue::undetermined;
        verdict.provenance = "numeric classification inconclusive";
        return verdict;
    }
    if (cls.verdict == Convergence::convergent) {
        verdict.value = MeasureValue::zero;
        verdict.provenance = "convergent cover-cost sum: the explicit fine covers force zero measure "
                             "(no monotonicity assumption)";
        return verdict;
    }
    switch (request.mode) {
    case SetupMode::homogeneous:
    case SetupMode::inhomogeneous:
    case SetupMode::doubly:
        if (monotone) {
            verdict.value = MeasureValue::infinite_value;
            verdict.provenance = "divergent cover-cost sum with monotone speed: the measure is infinite";
        } else {
            verdict.value = MeasureValue::undetermined;
            verdict.provenance = "divergent cover-cost sum without monotonicity: divergence statement "
                                 "unavailable";
        }
        break;
    case SetupMode::multivariable:
        if (monotone) {
            verdict.value = MeasureValue::conjectural_infinite;
            verdict.provenance = "divergent multivariable cover-cost sum with monotone speed: infinite "
                                 "measure expected but known only conjecturally";
        } else {
            verdict.value = MeasureValue::undetermined;
            verdict.provenance = "divergent multivariable cover-cost sum without monotonicity: no "
                                 "statement available";
        }
        break;
    }
    return verdict;
}

} // namespace multcover
