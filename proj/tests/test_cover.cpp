#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "multcover/cover.hpp"
#include "multcover/dyadic.hpp"
#include "multcover/errors.hpp"
#include "multcover/numeric.hpp"

using namespace multcover;

namespace {

// Test-local oracle: enumerate every exponent vector directly (recursive
// composition generation, no shared code with the library's iterator) and
// accumulate 2^(d k_max - t + d) * f(2^-k_max) per vector.
struct BruteCover {
    long double cost = 0.0L;
    unsigned long long cubes = 0;
    std::vector<std::vector<int>> vectors;
};

void brute_rec(int t, int d, std::vector<int>& k, BruteCover& out,
               const std::function<long double(long double)>& f) {
    if (static_cast<int>(k.size()) == d - 1) {
        k.push_back(t);
        const int km = *std::max_element(k.begin(), k.end());
        const int total_t = std::accumulate(k.begin(), k.end(), 0);
        const int e = d * km - total_t + d;
        out.cost += std::ldexp(f(std::ldexp(1.0L, -km)), e);
        out.cubes += 1ull << e;
        out.vectors.push_back(k);
        k.pop_back();
        return;
    }
    for (int v = 0; v <= t; ++v) {
        k.push_back(v);
        brute_rec(t - v, d, k, out, f);
        k.pop_back();
    }
}

BruteCover brute_cover(int N, int d, const std::function<long double(long double)>& f) {
    BruteCover out;
    std::vector<int> k;
    brute_rec(N - d, d, k, out, f);
    return out;
}

double cube_center_coord(const Hypercube& cube, std::size_t axis) {
    return cube.center[axis].to_double();
}

} // namespace

TEST_CASE("cover_cost frozen closed forms") {
    // N = d: single vector, 2^d unit cubes of side 1.
    CHECK(static_cast<double>(cover_cost(2, 2, 1.5).total) == 4.0);
    // N = 3, d = 2: two vectors, 8 cubes each of side 1/2.
    CHECK(static_cast<double>(cover_cost(3, 2, 1.5).total) ==
          doctest::Approx(16.0 * std::pow(2.0, -1.5)).epsilon(1e-15));
    // N = 5, d = 2: 2 * 8 * 4^-1.5 + 2 * 32 * 8^-1.5.
    CHECK(static_cast<double>(cover_cost(5, 2, 1.5).total) ==
          doctest::Approx(2 * 8 * std::pow(4.0, -1.5) + 2 * 32 * std::pow(8.0, -1.5))
              .epsilon(1e-15));
}

TEST_CASE("cover_cost equals brute-force enumeration over all exponent vectors") {
    const auto power = [](double s) {
        return [s](long double side) { return std::pow(side, static_cast<long double>(s)); };
    };
    for (int d = 2; d <= 4; ++d) {
        for (int N = d; N <= d + 8; ++N) {
            const double s = d - 0.5;
            const BruteCover brute = brute_cover(N, d, power(s));
            const CoverCost cost = cover_cost(N, d, power(s));
            CHECK(static_cast<double>(cost.total) ==
                  doctest::Approx(static_cast<double>(brute.cost)).epsilon(1e-14));
        }
    }
    // A log-corrected cost functional goes through the same identity.
    const DimensionFunction f = DimensionFunction::power_log(1.5, 1.0);
    const BruteCover brute = brute_cover(9, 2, [&](long double x) { return f.eval(x); });
    const CoverCost cost = cover_cost(9, 2, f);
    CHECK(static_cast<double>(cost.total) ==
          doctest::Approx(static_cast<double>(brute.cost)).epsilon(1e-14));
}

TEST_CASE("cover_cost profile grouping is consistent") {
    const CoverCost cost = cover_cost(12, 3, 2.5);
    long double sum = 0.0L;
    std::uint64_t vectors = 0;
    for (const auto& entry : cost.by_k_max) {
        CHECK(entry.count_log2 == 3 * entry.k_max - (12 - 3) + 3);
        sum += entry.contribution;
        vectors += entry.vector_count;
    }
    CHECK(static_cast<double>(sum) == doctest::Approx(static_cast<double>(cost.total)).epsilon(1e-15));
    CHECK(vectors == checked_binomial(11, 2));
}

TEST_CASE("cover_cost guards exponent overflow and cost underflow") {
    CHECK_THROWS_AS(cover_cost(20000, 2, 1.5), OverflowError);
    // Huge s drives the unit cost to zero at moderate depth.
    CHECK_THROWS_AS(cover_cost(4000, 2, [](long double side) {
                        return std::pow(side, 4000.0L);
                    }),
                    OverflowError);
}

TEST_CASE("ExponentSet enumerates exactly the compositions, in first-coordinate-descending order") {
    ExponentSet set(5, 2);
    std::vector<std::vector<int>> got;
    set.for_each([&](const ExponentVector& ev) { got.push_back(ev.k); });
    const std::vector<std::vector<int>> expected{{3, 0}, {2, 1}, {1, 2}, {0, 3}};
    CHECK(got == expected);
    CHECK(set.size() == 4);
}

TEST_CASE("ExponentSet size and contents match brute enumeration") {
    for (int d = 2; d <= 4; ++d) {
        for (int N = d; N <= d + 7; ++N) {
            const BruteCover brute = brute_cover(N, d, [](long double) { return 1.0L; });
            ExponentSet set(N, d);
            std::set<std::vector<int>> lib, ref(brute.vectors.begin(), brute.vectors.end());
            set.for_each([&](const ExponentVector& ev) {
                CHECK(std::accumulate(ev.k.begin(), ev.k.end(), 0) == N - d);
                CHECK(ev.k_max == *std::max_element(ev.k.begin(), ev.k.end()));
                lib.insert(ev.k);
            });
            CHECK(lib == ref);
            CHECK(set.size() == lib.size());
        }
    }
    CHECK(ExponentSet(10, 3).size() == 36);
}

TEST_CASE("materialize_cover frozen small cases") {
    // N = d = 2: the four unit squares of [-1,1]^2.
    const auto four = materialize_cover(2, 2);
    REQUIRE(four.size() == 4);
    std::set<std::pair<double, double>> centers;
    for (const auto& cube : four) {
        CHECK(cube.side_log2 == 0);
        centers.insert({cube_center_coord(cube, 0), cube_center_coord(cube, 1)});
    }
    CHECK(centers == std::set<std::pair<double, double>>{
                         {-0.5, -0.5}, {-0.5, 0.5}, {0.5, -0.5}, {0.5, 0.5}});

    // N = 3, d = 2: 16 cubes of side 1/2.
    const auto sixteen = materialize_cover(3, 2);
    CHECK(sixteen.size() == 16);
    for (const auto& cube : sixteen)
        CHECK(cube.side_log2 == 1);

    // N = d = 3: the eight unit cubes of [-1,1]^3.
    CHECK(materialize_cover(3, 3).size() == 8);
}

TEST_CASE("materialized count matches the closed-form total exactly") {
    for (int d = 2; d <= 3; ++d) {
        for (int N = d; N <= d + 6; ++N) {
            const BruteCover brute = brute_cover(N, d, [](long double) { return 1.0L; });
            CHECK(materialize_cover(N, d).size() == brute.cubes);
        }
    }
}

TEST_CASE("materialize_cover enforces the cube budget with the exact count") {
    try {
        materialize_cover(40, 2, 1000);
        FAIL("expected BudgetError");
    } catch (const BudgetError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("above the cap") != std::string::npos);
        // The message carries the exact decimal count, > 10 digits here.
        CHECK(msg.find_first_of("0123456789") != std::string::npos);
    }
}

TEST_CASE("cube_contains accepts the center and rejects outside points") {
    const auto cubes = materialize_cover(5, 2);
    for (const auto& cube : cubes) {
        std::vector<double> center{cube_center_coord(cube, 0), cube_center_coord(cube, 1)};
        CHECK(cube_contains(cube, center));
        const double side = std::ldexp(1.0, -cube.side_log2);
        // Just outside one face.
        std::vector<double> outside = center;
        outside[0] += side / 2 + side / 16;
        CHECK_FALSE(cube_contains(cube, outside));
        // Exactly on the face: closed cubes include their boundary.
        std::vector<double> face = center;
        face[1] += side / 2;
        CHECK(cube_contains(cube, face));
    }
}

TEST_CASE("point_to_box hand traces") {
    // N = 5, d = 2 (t = 3): reduction sheds excess from the largest entry.
    {
        const HyperbolaRegion region(2, 5);
        const std::vector<double> x{0.3, 0.02};
        const ExponentVector ev = point_to_box(x, region);
        CHECK(ev.k == std::vector<int>{1, 2});
    }
    // N = 4, d = 2 (t = 2): zero coordinate pinned to t, then reduced.
    {
        const HyperbolaRegion region(2, 4);
        const std::vector<double> x{0.0, 0.5};
        const ExponentVector ev = point_to_box(x, region);
        CHECK(ev.k == std::vector<int>{1, 1});
    }
    // Boundary point with exact dyadic coordinates: raw exponents (2, 3) sum
    // to 5 > t = 3; reduction decrements the max twice, ties at the low index.
    {
        const HyperbolaRegion region(2, 5);
        const std::vector<double> x{0.25, 0.125}; // product 2^-5 exactly
        const ExponentVector ev = point_to_box(x, region);
        CHECK(ev.k == std::vector<int>{1, 2});
        CHECK(std::fabs(x[0]) <= std::ldexp(1.0, -ev.k[0]));
        CHECK(std::fabs(x[1]) <= std::ldexp(1.0, -ev.k[1]));
    }
    // Points outside the region are refused.
    {
        const HyperbolaRegion region(2, 5);
        const std::vector<double> far{0.5, 0.5};
        CHECK_THROWS_AS(point_to_box(far, region), DomainError);
        const std::vector<double> out{1.5, 0.001};
        CHECK_THROWS_AS(point_to_box(out, region), DomainError);
    }
}

TEST_CASE("point_to_box covers sampled region points, including adversarial boundaries") {
    std::mt19937_64 rng(20240817);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    for (const auto& [d, N] : std::vector<std::pair<int, int>>{{2, 8}, {3, 9}}) {
        const HyperbolaRegion region(d, N);
        const int t = N - d;
        for (int trial = 0; trial < 2000; ++trial) {
            std::vector<double> x(static_cast<std::size_t>(d));
            double prod = 1.0;
            for (int i = 0; i + 1 < d; ++i) {
                x[static_cast<std::size_t>(i)] = unit(rng);
                prod *= std::fabs(x[static_cast<std::size_t>(i)]);
            }
            // Final coordinate scaled so the product lands inside the region.
            const double budget = std::ldexp(1.0, -N) / std::max(prod, 1e-300);
            const double mag = std::min(1.0, budget) * frac(rng);
            x[static_cast<std::size_t>(d - 1)] = (trial % 2 == 0 ? mag : -mag);
            REQUIRE(region.contains(x));
            const ExponentVector ev = point_to_box(x, region);
            long sum = 0;
            for (int i = 0; i < d; ++i) {
                CHECK(std::fabs(x[static_cast<std::size_t>(i)]) <=
                      std::ldexp(1.0, -ev.k[static_cast<std::size_t>(i)]));
                sum += ev.k[static_cast<std::size_t>(i)];
            }
            CHECK(sum == t);
        }
        // Adversarial boundary points: exact dyadic products equal to 2^-N.
        std::vector<std::vector<double>> corners;
        if (d == 2) {
            for (int a = 0; a <= N; ++a)
                corners.push_back({std::ldexp(1.0, -a), std::ldexp(1.0, -(N - a))});
            corners.push_back({0.0, 1.0});
            corners.push_back({1.0, 0.0});
            corners.push_back({0.0, 0.0});
        } else {
            corners.push_back({1.0, 1.0, std::ldexp(1.0, -N)});
            corners.push_back({std::ldexp(1.0, -3), std::ldexp(1.0, -3), std::ldexp(1.0, -(N - 6))});
            corners.push_back({0.0, 0.5, 0.5});
        }
        for (const auto& x : corners) {
            REQUIRE(region.contains(x));
            const ExponentVector ev = point_to_box(x, region);
            for (int i = 0; i < d; ++i)
                CHECK(std::fabs(x[static_cast<std::size_t>(i)]) <=
                      std::ldexp(1.0, -ev.k[static_cast<std::size_t>(i)]));
        }
    }
}

TEST_CASE("point_to_box target box is one of the materialized boxes and its cube contains the point") {
    const int d = 2, N = 8;
    const HyperbolaRegion region(d, N);
    const auto cubes = materialize_cover(N, d);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    std::uniform_real_distribution<double> frac(0.0, 1.0);
    for (int trial = 0; trial < 300; ++trial) {
        std::vector<double> x(2);
        x[0] = unit(rng);
        const double budget = std::ldexp(1.0, -N) / std::max(std::fabs(x[0]), 1e-300);
        x[1] = std::min(1.0, budget) * frac(rng);
        const ExponentVector ev = point_to_box(x, region);
        // Some materialized cube with exactly this side must contain the point.
        bool found = false;
        for (const auto& cube : cubes) {
            if (cube.side_log2 != ev.k_max)
                continue;
            if (cube_contains(cube, x)) {
                found = true;
                break;
            }
        }
        CHECK(found);
    }
}

TEST_CASE("HyperbolaRegion membership and radius") {
    const HyperbolaRegion region(2, 5);
    CHECK(static_cast<double>(region.radius()) == std::ldexp(1.0, -5));
    CHECK(region.contains(std::vector<double>{0.25, 0.125}));  // product exactly 2^-5
    CHECK(region.contains(std::vector<double>{0.25, -0.125}));
    CHECK_FALSE(region.contains(std::vector<double>{0.26, 0.125}));
    CHECK(region.contains(std::vector<double>{0.0, 1.0}));
    CHECK_FALSE(region.contains(std::vector<double>{1.0001, 0.0}));
    CHECK_THROWS_AS(HyperbolaRegion(1, 5), DomainError);
    CHECK_THROWS_AS(HyperbolaRegion(2, 1), DomainError);
    // Largest k with 0.2 <= 2^-k is k = 2, so the region snaps to N = 2.
    const HyperbolaRegion fr = HyperbolaRegion::from_radius(2, 0.2);
    CHECK(fr.N() == 2);
    CHECK_THROWS_AS(HyperbolaRegion::from_radius(2, 0.3), DomainError);
}

TEST_CASE("cost_scaling_report frozen ratios for d=2, s=1.5") {
    const ScalingReport rep = cost_scaling_report(2, 1.5, 2, 5);
    REQUIRE(rep.rows.size() == 4);
    const std::vector<double> expected{8.0, 16.0, 21.65685424949238, 27.31370849898476};
    for (std::size_t i = 0; i < 4; ++i)
        CHECK(static_cast<double>(rep.rows[i].ratio) ==
              doctest::Approx(expected[i]).epsilon(1e-12));
    CHECK(rep.ratio_sup >= rep.ratio_inf);
}

TEST_CASE("per-k_max contributions form an exact geometric ladder for d=2") {
    // d = 2, s = 1.5: for t/2 < m < t each group holds exactly two vectors and
    // the contribution ratio between consecutive m is 2^(d - s) = 2^0.5.
    const CoverCost cost = cover_cost(22, 2, 1.5);
    const double expected_ratio = std::pow(2.0, 0.5);
    for (std::size_t i = 0; i + 2 < cost.by_k_max.size(); ++i) {
        const auto& a = cost.by_k_max[i + 1];
        const auto& b = cost.by_k_max[i + 2];
        if (a.vector_count != 2 || b.vector_count != 2)
            continue;
        CHECK(static_cast<double>(b.contribution / a.contribution) ==
              doctest::Approx(expected_ratio).epsilon(1e-13));
    }
}
