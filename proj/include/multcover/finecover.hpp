#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "multcover/cover.hpp"
#include "multcover/errors.hpp"
#include "multcover/functions.hpp"

namespace multcover {

// A translation parameter theta in R^d, stored reduced mod 1 into [0,1)^d.
class InhomogeneousShift {
  public:
    explicit InhomogeneousShift(std::vector<double> theta);
    static InhomogeneousShift zero(int d) { return InhomogeneousShift(std::vector<double>(d, 0.0)); }

    [[nodiscard]] std::span<const double> components() const { return theta_; }
    [[nodiscard]] int d() const { return static_cast<int>(theta_.size()); }

  private:
    std::vector<double> theta_;
};

// The grid of resonant cells at denominator q: integer translates p such
// that ((p + theta)/q + [-1/q, 1/q]^d) meets the unit cube.  Exactly q + 2
// translates per axis for reduced shifts, independent of theta.
struct ResonantCellFamily {
    std::uint64_t q = 0;
    int d = 0;
    std::uint64_t per_axis = 0;   // q + 2
    long double cell_count = 0.0L; // (q+2)^d
};

ResonantCellFamily resonant_cells(std::uint64_t q, const InhomogeneousShift& shift);

struct LedgerRow {
    std::uint64_t q = 0;
    long double term = 0.0L;
    long double running_total = 0.0L;
    long double comparison_term = 0.0L;
    bool degenerate = false; // psi(q) too large for a hyperbolic cover; unit cover used
};

struct CostLedger {
    std::vector<LedgerRow> rows;
    long double total = 0.0L;
    long double comparison_total = 0.0L;
    std::uint64_t Q = 0;
    int degenerate_rows = 0;
    bool divergent_trend = false; // partial sums not flattening near Q
    // Doubly-metric diagnostics: range of the per-cell collapse identity
    // (cell count x volume-scaled cost) / unit cost, which the construction
    // pins inside [1, 2^d].
    std::optional<long double> collapse_min;
    std::optional<long double> collapse_max;

    [[nodiscard]] long double ratio() const {
        if (comparison_total <= 0.0L)
            throw DomainError("CostLedger::ratio: comparison sum is not positive");
        return total / comparison_total;
    }
};

// Truncated cost of the explicit fine covers: for each q <= Q, every
// resonant cell carries a scaled hyperbolic cover at radius psi(q), costed
// with x -> f(x/q).  The comparison column is q^d psi(q)^(1-d) f(psi(q)/q).
// Requires f to satisfy the quasi-power-law and slice-monotonicity checks.
CostLedger finecover_cost_truncated(const ApproximatingFunction& psi, const DimensionFunction& f,
                                    int d, const InhomogeneousShift& shift, std::uint64_t Q);

// Doubly-metric variant: the shift weight becomes part of the measured space,
// cells are refined to the graph scale delta = (side/q)(1+1/q) and costed
// with the volume-scaled function F(x) = x^d f(x).
CostLedger doubly_metric_cost_truncated(const ApproximatingFunction& psi, const DimensionFunction& f,
                                        int d, std::uint64_t Q);

struct DoublingReport {
    bool holds = false;
    long double ratio_bound = 0.0L; // sup of max(f(2r)/f(r), f(r)/f(2r))
    std::optional<double> witness;  // r where the bound misbehaved
};

// Doubling property of f on (0, 1/2]: both f(2r)/f(r) and its reciprocal
// stay bounded (pure power x^s: exactly 2^s).
DoublingReport f_doubling_check(const DimensionFunction& f, GridSpec grid = {});

} // namespace multcover
