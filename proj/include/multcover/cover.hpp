#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "multcover/dyadic.hpp"
#include "multcover/errors.hpp"
#include "multcover/functions.hpp"

namespace multcover {

// The hyperbolic neighbourhood M(r) = { x in [-1,1]^d : prod |x_i| <= r } at
// a dyadic radius r = 2^-N, N >= d >= 2.  Membership tests are exact.
class HyperbolaRegion {
  public:
    HyperbolaRegion(int d, int N);
    // Region for the largest dyadic radius 2^-N <= ... >= r, i.e. the largest
    // N with r <= 2^-N.  Requires 0 < r <= 2^-d.
    static HyperbolaRegion from_radius(int d, double r);

    [[nodiscard]] int d() const { return d_; }
    [[nodiscard]] int N() const { return N_; }
    [[nodiscard]] long double radius() const; // 2^-N, exact
    [[nodiscard]] bool contains(std::span<const double> x) const;

  private:
    int d_;
    int N_;
};

// One dyadic box of the standard cover: exponents k_i >= 0 with
// sum k_i = N - d.  The box prod_i [-2^-k_i, 2^-k_i] splits into exactly
// 2^(d*k_max - (N-d) + d) hypercubes of side 2^-k_max.
struct ExponentVector {
    std::vector<int> k;
    int k_max = 0;
    int count_log2 = 0;

    // Number of side-2^-k_max hypercubes tiling this box; throws
    // OverflowError if it does not fit in 64 bits.
    [[nodiscard]] std::uint64_t cube_count() const;
    [[nodiscard]] long double side() const; // 2^-k_max
};

// The index set of the cover: all exponent vectors for given (N, d),
// enumerated with the first coordinate descending (e.g. for N=5, d=2:
// (3,0), (2,1), (1,2), (0,3)).
class ExponentSet {
  public:
    ExponentSet(int N, int d);

    [[nodiscard]] std::uint64_t size() const; // C(N-1, d-1), overflow-checked
    // Calls fn for every exponent vector, in enumeration order.
    void for_each(const std::function<void(const ExponentVector&)>& fn) const;
    [[nodiscard]] std::vector<ExponentVector> to_vector() const;

    [[nodiscard]] int N() const { return N_; }
    [[nodiscard]] int d() const { return d_; }

  private:
    int N_;
    int d_;
};

struct CostProfileEntry {
    int k_max = 0;
    std::uint64_t vector_count = 0; // exponent vectors sharing this k_max
    int count_log2 = 0;             // per-vector cube count exponent
    long double contribution = 0.0L;
};

struct CoverCost {
    long double total = 0.0L;
    std::vector<CostProfileEntry> by_k_max; // ascending k_max
};

// Total cover cost sum over cubes of unit_cost(side), computed in closed form
// grouped by k_max — no cube materialization.  unit_cost must be positive on
// (0, 1].
CoverCost cover_cost(int N, int d, const std::function<long double(long double)>& unit_cost);
CoverCost cover_cost(int N, int d, const DimensionFunction& f);
CoverCost cover_cost(int N, int d, double s);

struct Hypercube {
    std::vector<Dyadic> center;
    int side_log2 = 0; // side = 2^-side_log2
};

// Explicit cube list of the cover (for audits and small-N validation).
// Throws BudgetError naming the exact count when it would exceed cap.
std::vector<Hypercube> materialize_cover(int N, int d, std::uint64_t cap = 10'000'000);

// Closed-cube membership, exact (dyadic scaling, no rounding).
bool cube_contains(const Hypercube& cube, std::span<const double> x);

// Locates the exponent vector of a cover box containing x (which must lie in
// the region).  Per-coordinate dyadic exponents are capped at N-d and then
// reduced to total N-d by decrementing the currently largest coordinate
// (ties broken toward the lowest index).
ExponentVector point_to_box(std::span<const double> x, const HyperbolaRegion& region);

struct ScalingRow {
    int N = 0;
    long double cost = 0.0L;
    long double ratio = 0.0L; // cost / r^(s-d+1), r = 2^-N
    long double slope_so_far = 0.0L;
};

struct ScalingReport {
    std::vector<ScalingRow> rows;
    long double slope = 0.0L; // least-squares slope of log2(cost) against -N
    long double ratio_sup = 0.0L;
    long double ratio_inf = 0.0L;
    std::vector<CostProfileEntry> profile; // per-k_max contributions at N_max
};

ScalingReport cost_scaling_report(int d, double s, int N_min, int N_max);

} // namespace multcover
