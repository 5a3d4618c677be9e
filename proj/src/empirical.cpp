#include "multcover/empirical.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>

#include "multcover/parallel.hpp"

namespace multcover {

double nearest_int_distance(double y) {
    if (!std::isfinite(y))
        throw DomainError("nearest_int_distance: non-finite argument");
    return std::fabs(std::remainder(y, 1.0));
}

HitRecord count_hits(std::span<const double> x, std::span<const double> theta,
                     const ApproximatingFunction& psi, std::uint64_t Q) {
    if (x.empty() || x.size() != theta.size())
        throw DomainError("count_hits: point/shift dimension mismatch");
    if (Q < 1)
        throw DomainError("count_hits: Q must be >= 1");
    // Reduce the point mod 1 so integer translates of x give identical scans.
    std::vector<double> xr(x.begin(), x.end());
    for (double& v : xr) {
        if (!std::isfinite(v))
            throw DomainError("count_hits: non-finite coordinate");
        v -= std::floor(v);
        if (v >= 1.0)
            v = 0.0;
    }
    HitRecord rec;
    rec.Q = Q;
    for (std::uint64_t q = 1; q <= Q; ++q) {
        long double product = 1.0L;
        for (std::size_t i = 0; i < xr.size(); ++i)
            product *= static_cast<long double>(
                nearest_int_distance(static_cast<double>(q) * xr[i] - theta[i]));
        if (product < static_cast<long double>(psi(q))) {
            rec.hits.push_back(q);
            rec.products.push_back(product);
        }
    }
    return rec;
}

namespace {

// SplitMix64: the standard 64-bit finalizer used to derive independent
// per-partition stream seeds from (seed, partition).
std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

// xoshiro-style uniform double in [0, 1) from 53 random bits; the explicit
// mapping keeps streams identical across standard libraries.
double uniform01(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

class Stream {
  public:
    explicit Stream(std::uint64_t s) : state_(s == 0 ? 0x106689d45497fdb5ull : s) {}
    std::uint64_t next() {
        // xorshift64*: small, fast, reproducible everywhere.
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * 0x2545f4914f6cdd1dull;
    }
    double next01() { return uniform01(next()); }

  private:
    std::uint64_t state_;
};

} // namespace

TailEstimate lebesgue_tail_estimate(const ApproximatingFunction& psi, std::span<const double> theta,
                                    int d, std::uint64_t Q1, std::uint64_t Q2, std::uint64_t samples,
                                    std::uint64_t seed) {
    if (d < 1 || static_cast<std::size_t>(d) != theta.size())
        throw DomainError("lebesgue_tail_estimate: shift dimension mismatch");
    if (Q1 < 1 || Q2 < Q1)
        throw DomainError("lebesgue_tail_estimate: need 1 <= Q1 <= Q2");
    if (samples < 1)
        throw DomainError("lebesgue_tail_estimate: need at least one sample");

    // Precompute psi over the window once.
    std::vector<double> psi_values(Q2 - Q1 + 1);
    for (std::uint64_t q = Q1; q <= Q2; ++q)
        psi_values[q - Q1] = psi(q);

    constexpr std::size_t partitions = 64;
    std::vector<std::uint64_t> partition_hits(partitions, 0);
    std::vector<double> theta_copy(theta.begin(), theta.end());
    parallel_chunks(partitions, [&](std::size_t p) {
        Stream rng(splitmix64(seed ^ (0xa5a5a5a5a5a5a5a5ull + p)));
        const std::uint64_t n = samples / partitions + (p < samples % partitions ? 1 : 0);
        std::uint64_t local_hits = 0;
        std::vector<double> x(static_cast<std::size_t>(d));
        for (std::uint64_t i = 0; i < n; ++i) {
            for (auto& xi : x)
                xi = rng.next01();
            bool hit = false;
            for (std::uint64_t q = Q1; q <= Q2 && !hit; ++q) {
                long double product = 1.0L;
                for (int axis = 0; axis < d; ++axis)
                    product *= static_cast<long double>(nearest_int_distance(
                        static_cast<double>(q) * x[static_cast<std::size_t>(axis)] -
                        theta_copy[static_cast<std::size_t>(axis)]));
                hit = product < static_cast<long double>(psi_values[q - Q1]);
            }
            if (hit)
                ++local_hits;
        }
        partition_hits[p] = local_hits;
    });

    TailEstimate est;
    est.samples = samples;
    est.seed = seed;
    for (std::size_t p = 0; p < partitions; ++p)
        est.hits += partition_hits[p];
    est.estimate = static_cast<double>(est.hits) / static_cast<double>(samples);
    const WilsonInterval ci = wilson_interval(est.hits, samples);
    est.ci_low = ci.low;
    est.ci_high = ci.high;
    return est;
}

BoxCountResult box_dimension_estimate(const ApproximatingFunction& psi, std::span<const double> theta,
                                      int d, std::uint64_t Q1, std::uint64_t Q2, int j_min, int j_max,
                                      std::uint64_t memory_budget_bytes) {
    if (d < 1 || static_cast<std::size_t>(d) != theta.size())
        throw DomainError("box_dimension_estimate: shift dimension mismatch");
    if (Q1 < 1 || Q2 < Q1)
        throw DomainError("box_dimension_estimate: need 1 <= Q1 <= Q2");
    if (j_min < 1 || j_max < j_min)
        throw DomainError("box_dimension_estimate: need 1 <= j_min <= j_max");
    if (j_max * d >= 62)
        throw DomainError("box_dimension_estimate: grid exceeds 2^62 boxes");

    const std::uint64_t q_count = Q2 - Q1 + 1;
    // Memory: per-axis endpoint-distance tables (q_count * d * (2^j_max + 1)
    // doubles) dominate.
    {
        const std::uint64_t cells = (1ull << j_max) + 1;
        const std::uint64_t required = q_count * static_cast<std::uint64_t>(d) * cells * sizeof(double);
        if (required > memory_budget_bytes)
            throw BudgetError("box_dimension_estimate: needs " + std::to_string(required) +
                              " bytes for distance tables, above the budget of " +
                              std::to_string(memory_budget_bytes));
    }

    std::vector<double> psi_values(q_count);
    for (std::uint64_t q = Q1; q <= Q2; ++q)
        psi_values[q - Q1] = psi(q);

    BoxCountResult result;
    std::vector<long double> xs, ys;
    for (int j = j_min; j <= j_max; ++j) {
        const std::uint64_t n = 1ull << j;
        // dist[(qi * d + axis) * (n + 1) + c] = ||q * (c / n) - theta_axis||.
        std::vector<double> dist(q_count * static_cast<std::uint64_t>(d) * (n + 1));
        for (std::uint64_t qi = 0; qi < q_count; ++qi) {
            const auto q = static_cast<double>(Q1 + qi);
            for (int axis = 0; axis < d; ++axis) {
                double* row = dist.data() + (qi * static_cast<std::uint64_t>(d) +
                                             static_cast<std::uint64_t>(axis)) * (n + 1);
                const double th = theta[static_cast<std::size_t>(axis)];
                for (std::uint64_t c = 0; c <= n; ++c) {
                    const double corner = static_cast<double>(c) / static_cast<double>(n);
                    row[c] = nearest_int_distance(q * corner - th);
                }
            }
        }
        auto corner_min = [&](std::uint64_t qi, int axis, std::uint64_t c) {
            const double* row = dist.data() + (qi * static_cast<std::uint64_t>(d) +
                                               static_cast<std::uint64_t>(axis)) * (n + 1);
            return std::min(row[c], row[c + 1]);
        };

        // Count marked boxes, parallel over the first axis.
        std::vector<std::uint64_t> counts(n, 0);
        parallel_chunks(n, [&](std::size_t c0) {
            std::uint64_t local = 0;
            std::vector<std::uint64_t> idx(static_cast<std::size_t>(d), 0);
            idx[0] = c0;
            // Odometer over axes 1..d-1 with axis 0 pinned to this chunk.
            while (true) {
                bool marked = false;
                for (std::uint64_t qi = 0; qi < q_count && !marked; ++qi) {
                    long double product = 1.0L;
                    for (int axis = 0; axis < d; ++axis)
                        product *= static_cast<long double>(
                            corner_min(qi, axis, idx[static_cast<std::size_t>(axis)]));
                    marked = product < static_cast<long double>(psi_values[qi]);
                }
                if (marked)
                    ++local;
                int axis = d - 1;
                while (axis >= 1) {
                    if (++idx[static_cast<std::size_t>(axis)] < n)
                        break;
                    idx[static_cast<std::size_t>(axis)] = 0;
                    --axis;
                }
                if (axis < 1)
                    break;
            }
            counts[c0] = local;
        });
        std::uint64_t count = 0;
        for (std::uint64_t c : counts)
            count += c;
        result.rows.push_back({j, count});
        if (count > 0) {
            xs.push_back(static_cast<long double>(j));
            ys.push_back(std::log2(static_cast<long double>(count)));
        }
    }
    if (xs.size() < 2)
        throw DomainError("box_dimension_estimate: fewer than two resolutions produced marked boxes");
    result.dimension = static_cast<double>(linear_fit(xs, ys).slope);
    return result;
}

} // namespace multcover
