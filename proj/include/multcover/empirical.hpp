#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "multcover/errors.hpp"
#include "multcover/functions.hpp"
#include "multcover/numeric.hpp"

namespace multcover {

// Distance from y to the nearest integer, computed with round-half-even
// (|remainder(y, 1)|), so results do not depend on the FPU rounding state.
double nearest_int_distance(double y);

struct HitRecord {
    std::uint64_t Q = 0;
    std::vector<std::uint64_t> hits;      // q values with prod_i ||q x_i - theta_i|| < psi(q)
    std::vector<long double> products;    // the products at those q
};

// Exact hit enumeration for a single point x (reduced mod 1 on entry).
HitRecord count_hits(std::span<const double> x, std::span<const double> theta,
                     const ApproximatingFunction& psi, std::uint64_t Q);

struct TailEstimate {
    double estimate = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::uint64_t hits = 0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
};

// Monte Carlo estimate of the volume of the union over q in [Q1, Q2] of
// { x in [0,1]^d : prod_i ||q x_i - theta_i|| < psi(q) }, with a Wilson 95%
// interval.  Sampling is split into a fixed number of partitions whose RNG
// streams depend only on (seed, partition), so results are bit-identical for
// any thread count.
TailEstimate lebesgue_tail_estimate(const ApproximatingFunction& psi, std::span<const double> theta,
                                    int d, std::uint64_t Q1, std::uint64_t Q2, std::uint64_t samples,
                                    std::uint64_t seed);

struct BoxCountRow {
    int j = 0;              // resolution: 2^j boxes per axis
    std::uint64_t count = 0; // marked boxes
};

struct BoxCountResult {
    std::vector<BoxCountRow> rows;
    double dimension = 0.0; // least-squares slope of log2(count) against j
};

// Box-counting dimension scan: a box of the 2^-j grid is marked when, for
// some q in [Q1, Q2], the product over axes of the smaller endpoint distance
// min(||q l_i - theta_i||, ||q u_i - theta_i||) falls below psi(q).  The
// marking rule is deterministic; seed is echoed into reports only.
BoxCountResult box_dimension_estimate(const ApproximatingFunction& psi, std::span<const double> theta,
                                      int d, std::uint64_t Q1, std::uint64_t Q2, int j_min, int j_max,
                                      std::uint64_t memory_budget_bytes = 1ull << 30);

} // namespace multcover
