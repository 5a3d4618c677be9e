#include "multcover/finecover.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "multcover/numeric.hpp"

namespace multcover {

InhomogeneousShift::InhomogeneousShift(std::vector<double> theta) : theta_(std::move(theta)) {
    if (theta_.empty())
        throw DomainError("InhomogeneousShift: empty shift vector");
    for (double& t : theta_) {
        if (!std::isfinite(t))
            throw DomainError("InhomogeneousShift: non-finite component");
        t -= std::floor(t);
        if (t >= 1.0) // guard the floor boundary for values like -1e-17
            t = 0.0;
    }
}

ResonantCellFamily resonant_cells(std::uint64_t q, const InhomogeneousShift& shift) {
    if (q < 1)
        throw DomainError("resonant_cells: q must be >= 1");
    ResonantCellFamily fam;
    fam.q = q;
    fam.d = shift.d();
    // Per axis: integers p with -1 - theta <= p <= q + 1 - theta, i.e.
    // ceil(q + 1 - theta) - ceil(-1 - theta) counting from the reduced shift.
    // For theta in [0,1) this is exactly q + 2, independent of theta.
    const double theta0 = shift.components()[0];
    const auto lo = static_cast<std::int64_t>(std::ceil(-1.0 - theta0));
    const auto hi = static_cast<std::int64_t>(std::ceil(static_cast<double>(q) + 1.0 - theta0));
    const auto per_axis_signed = hi - lo;
    if (per_axis_signed != static_cast<std::int64_t>(q) + 2)
        throw Error("resonant_cells: translate count deviates from q + 2 (internal)");
    fam.per_axis = static_cast<std::uint64_t>(per_axis_signed);
    long double count = 1.0L;
    for (int i = 0; i < fam.d; ++i)
        count *= static_cast<long double>(fam.per_axis);
    fam.cell_count = count;
    return fam;
}

namespace {

void check_measure_hypotheses(const ApproximatingFunction&, const DimensionFunction& f, int d,
                              const char* who) {
    const ConditionIResult qpl = check_quasi_power_law(f, d);
    if (!qpl.holds)
        throw DomainError(std::string(who) + ": dimension function fails the quasi-power-law check");
    const ConditionIIResult mono = check_slice_monotonicity(f, d);
    if (!mono.holds)
        throw DomainError(std::string(who) + ": dimension function fails slice monotonicity");
}

void finish_ledger(CostLedger& ledger) {
    // Divergence trend: compare the last two halves of the running total.
    const auto& rows = ledger.rows;
    if (rows.size() >= 8) {
        const std::size_t n = rows.size();
        const long double t_full = rows[n - 1].running_total;
        const long double t_half = rows[n / 2 - 1].running_total;
        const long double t_quarter = rows[n / 4 - 1].running_total;
        const long double inc_late = t_full - t_half;
        const long double inc_early = t_half - t_quarter;
        ledger.divergent_trend = inc_early > 0.0L && inc_late >= 0.75L * inc_early;
    }
}

long double comparison_term_value(const ApproximatingFunction& psi, const DimensionFunction& f,
                                  int d, std::uint64_t q) {
    const long double psiq = psi(q);
    const long double x = std::min(1.0L, psiq / static_cast<long double>(q));
    long double v = f.eval(x);
    v *= std::pow(static_cast<long double>(q), static_cast<long double>(d));
    v *= std::pow(psiq, static_cast<long double>(1 - d));
    return v;
}

} // namespace

CostLedger finecover_cost_truncated(const ApproximatingFunction& psi, const DimensionFunction& f,
                                    int d, const InhomogeneousShift& shift, std::uint64_t Q) {
    if (d < 2)
        throw DomainError("finecover_cost_truncated: d must be >= 2");
    if (shift.d() != d)
        throw DomainError("finecover_cost_truncated: shift dimension mismatch");
    if (Q < 1)
        throw DomainError("finecover_cost_truncated: Q must be >= 1");
    check_measure_hypotheses(psi, f, d, "finecover_cost_truncated");

    CostLedger ledger;
    ledger.Q = Q;
    Accumulator total, comparison;
    const long double degenerate_threshold = std::ldexp(1.0L, -d);
    for (std::uint64_t q = 1; q <= Q; ++q) {
        const ResonantCellFamily cells = resonant_cells(q, shift);
        const double psiq = psi(q);
        LedgerRow row;
        row.q = q;
        if (static_cast<long double>(psiq) > degenerate_threshold) {
            // psi too large for a hyperbolic cover: cover each scaled cell by
            // the 2^d unit cubes of [-1,1]^d, each of scaled side 1/q.
            row.degenerate = true;
            ++ledger.degenerate_rows;
            const long double unit = f.eval(1.0L / static_cast<long double>(q));
            row.term = cells.cell_count * std::ldexp(unit, d);
        } else {
            const int N = largest_pow2_exponent(psiq);
            const CoverCost cost = cover_cost(N, d, [&](long double side) {
                return f.eval(side / static_cast<long double>(q));
            });
            row.term = cells.cell_count * cost.total;
        }
        row.comparison_term = comparison_term_value(psi, f, d, q);
        total.add(row.term);
        comparison.add(row.comparison_term);
        row.running_total = total.value();
        ledger.rows.push_back(row);
    }
    ledger.total = total.value();
    ledger.comparison_total = comparison.value();
    finish_ledger(ledger);
    return ledger;
}

CostLedger doubly_metric_cost_truncated(const ApproximatingFunction& psi, const DimensionFunction& f,
                                        int d, std::uint64_t Q) {
    if (d < 2)
        throw DomainError("doubly_metric_cost_truncated: d must be >= 2");
    if (Q < 1)
        throw DomainError("doubly_metric_cost_truncated: Q must be >= 1");
    check_measure_hypotheses(psi, f, d, "doubly_metric_cost_truncated");

    CostLedger ledger;
    ledger.Q = Q;
    Accumulator total, comparison;
    long double collapse_min = 0.0L, collapse_max = 0.0L;
    bool collapse_seen = false;
    const long double degenerate_threshold = std::ldexp(1.0L, -d);
    const InhomogeneousShift zero_shift = InhomogeneousShift::zero(d);
    for (std::uint64_t q = 1; q <= Q; ++q) {
        const ResonantCellFamily cells = resonant_cells(q, zero_shift);
        const double psiq = psi(q);
        const long double ql = static_cast<long double>(q);
        const long double graph_stretch = 1.0L + 1.0L / ql;
        LedgerRow row;
        row.q = q;

        // Per k_max group: W exponent vectors, 2^E cubes each, side 2^-m.
        // Each scaled cube (side/q) refines into ceil(q/side)^d = (q 2^m)^d
        // cells of diameter delta = (side/q)(1+1/q), costed with
        // F(x) = x^d f(x).  Algebraically cellcount * F(delta) =
        // (1+1/q)^d f(delta); accumulate the collapsed form (stable) and
        // track the identity value cellcount * delta^d independently.
        auto add_group = [&](int m, std::uint64_t W, int E) {
            const long double side = std::ldexp(1.0L, -m);
            const long double delta = (side / ql) * graph_stretch;
            long double per_cube;
            if (delta > 1.0L) {
                // Only reachable at q = 1, where the graph stretch doubles a
                // coarse cell past the ambient diameter.  Pieces never need
                // to exceed diameter 1, and f is increasing, so cover with
                // unit-diameter pieces: cellcount * F(1).
                const long double cells_per_cube =
                    std::pow(ql * std::ldexp(1.0L, m), static_cast<long double>(d));
                per_cube = cells_per_cube * f.eval(1.0L);
            } else {
                per_cube = std::pow(graph_stretch, static_cast<long double>(d)) * f.eval(delta);
            }
            const long double group = static_cast<long double>(W) * std::ldexp(per_cube, E);
            row.term += cells.cell_count * group;
            // Independent collapse identity: (q 2^m)^d * delta^d.
            const long double cells_per_cube =
                std::pow(ql * std::ldexp(1.0L, m), static_cast<long double>(d));
            const long double identity = cells_per_cube * std::pow(delta, static_cast<long double>(d));
            if (std::isfinite(identity) && identity > 0.0L) {
                if (!collapse_seen) {
                    collapse_min = collapse_max = identity;
                    collapse_seen = true;
                } else {
                    collapse_min = std::min(collapse_min, identity);
                    collapse_max = std::max(collapse_max, identity);
                }
            }
        };

        if (static_cast<long double>(psiq) > degenerate_threshold) {
            row.degenerate = true;
            ++ledger.degenerate_rows;
            add_group(0, 1, d); // unit cover: single vector, 2^d unit cubes
        } else {
            const int N = largest_pow2_exponent(psiq);
            const int t = N - d;
            const int m_lo = t == 0 ? 0 : (t + d - 1) / d;
            for (int m = m_lo; m <= std::max(m_lo, t); ++m) {
                const std::uint64_t W = composition_count_with_max(static_cast<std::uint64_t>(t), d,
                                                                   static_cast<std::uint64_t>(m));
                if (W == 0)
                    continue;
                add_group(m, W, d * m - t + d);
            }
        }
        row.comparison_term = comparison_term_value(psi, f, d, q);
        total.add(row.term);
        comparison.add(row.comparison_term);
        row.running_total = total.value();
        ledger.rows.push_back(row);
    }
    ledger.total = total.value();
    ledger.comparison_total = comparison.value();
    if (collapse_seen) {
        ledger.collapse_min = collapse_min;
        ledger.collapse_max = collapse_max;
    }
    finish_ledger(ledger);
    return ledger;
}

DoublingReport f_doubling_check(const DimensionFunction& f, GridSpec grid) {
    DoublingReport rep;
    if (!(grid.x_min > 0.0) || grid.x_min >= 0.5 || grid.points_per_octave < 1)
        throw DomainError("f_doubling_check: need 0 < x_min < 1/2");
    const long double step = std::pow(0.5L, 1.0L / grid.points_per_octave);
    long double worst = 0.0L;
    double witness = 0.0;
    for (long double r = 0.5L; r >= static_cast<long double>(grid.x_min); r *= step) {
        const long double up = f.eval(2.0L * r) / f.eval(r);
        const long double ratio = std::max(up, 1.0L / up);
        if (ratio > worst) {
            worst = ratio;
            witness = static_cast<double>(r);
        }
    }
    rep.ratio_bound = worst;
    rep.holds = std::isfinite(static_cast<double>(worst));
    if (!rep.holds)
        rep.witness = witness;
    return rep;
}

} // namespace multcover
