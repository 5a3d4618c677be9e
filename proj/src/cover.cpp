#include "multcover/cover.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "multcover/numeric.hpp"

namespace multcover {

namespace {

void validate_dims(int d, int N, const char* who) {
    if (d < 2)
        throw DomainError(std::string(who) + ": d must be >= 2");
    if (N < d)
        throw DomainError(std::string(who) + ": N must be >= d (radius at most 2^-d)");
}

} // namespace

HyperbolaRegion::HyperbolaRegion(int d, int N) : d_(d), N_(N) {
    validate_dims(d, N, "HyperbolaRegion");
}

HyperbolaRegion HyperbolaRegion::from_radius(int d, double r) {
    if (!(r > 0.0) || r > std::ldexp(1.0, -d))
        throw DomainError("HyperbolaRegion::from_radius: need 0 < r <= 2^-d");
    return HyperbolaRegion(d, largest_pow2_exponent(r));
}

long double HyperbolaRegion::radius() const {
    return std::ldexp(1.0L, -N_);
}

bool HyperbolaRegion::contains(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != d_)
        throw DomainError("HyperbolaRegion::contains: dimension mismatch");
    for (double xi : x)
        if (std::fabs(xi) > 1.0)
            return false;
    return compare_product_pow2(x, N_) != ProductOrder::greater;
}

std::uint64_t ExponentVector::cube_count() const {
    if (count_log2 < 0)
        throw OverflowError("ExponentVector::cube_count: negative exponent (inconsistent vector)");
    if (count_log2 >= 64)
        throw OverflowError("ExponentVector::cube_count: count 2^" + std::to_string(count_log2) +
                            " exceeds 64 bits");
    return std::uint64_t{1} << count_log2;
}

long double ExponentVector::side() const {
    return std::ldexp(1.0L, -k_max);
}

ExponentSet::ExponentSet(int N, int d) : N_(N), d_(d) {
    validate_dims(d, N, "ExponentSet");
}

std::uint64_t ExponentSet::size() const {
    return checked_binomial(static_cast<std::uint64_t>(N_) - 1, static_cast<std::uint64_t>(d_) - 1);
}

void ExponentSet::for_each(const std::function<void(const ExponentVector&)>& fn) const {
    const int t = N_ - d_;
    ExponentVector ev;
    ev.k.assign(static_cast<std::size_t>(d_), 0);
    ev.k[0] = t;
    auto emit = [&] {
        ev.k_max = *std::max_element(ev.k.begin(), ev.k.end());
        ev.count_log2 = d_ * ev.k_max - t + d_;
        fn(ev);
    };
    emit();
    // Successor in first-coordinate-descending order: move one unit from the
    // rightmost positive entry among the first d-1 into its right neighbour,
    // sweeping everything beyond back onto that neighbour.
    while (true) {
        int h = -1;
        for (int i = d_ - 2; i >= 0; --i) {
            if (ev.k[static_cast<std::size_t>(i)] > 0) {
                h = i;
                break;
            }
        }
        if (h < 0)
            break; // all weight in the last coordinate: enumeration done
        const int tail = ev.k[static_cast<std::size_t>(d_ - 1)];
        ev.k[static_cast<std::size_t>(d_ - 1)] = 0;
        ev.k[static_cast<std::size_t>(h)] -= 1;
        ev.k[static_cast<std::size_t>(h + 1)] = tail + 1;
        emit();
    }
}

std::vector<ExponentVector> ExponentSet::to_vector() const {
    std::vector<ExponentVector> out;
    out.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(size(), 1u << 20)));
    for_each([&](const ExponentVector& ev) { out.push_back(ev); });
    return out;
}

CoverCost cover_cost(int N, int d, const std::function<long double(long double)>& unit_cost) {
    validate_dims(d, N, "cover_cost");
    const int t = N - d;
    if (static_cast<long>(d) * t + d > 16000)
        throw OverflowError("cover_cost: cube-count exponents exceed extended-precision range");
    CoverCost cost;
    Accumulator acc;
    // k_max ranges over [ceil(t/d), t]; group the exponent vectors by k_max.
    const int m_lo = t == 0 ? 0 : (t + d - 1) / d;
    for (int m = m_lo; m <= std::max(m_lo, t); ++m) {
        const std::uint64_t vectors = composition_count_with_max(static_cast<std::uint64_t>(t), d,
                                                                 static_cast<std::uint64_t>(m));
        if (vectors == 0)
            continue;
        const int count_log2 = d * m - t + d;
        const long double side = std::ldexp(1.0L, -m);
        const long double per_cube = unit_cost(side);
        if (!(per_cube > 0.0L))
            throw OverflowError("cover_cost: unit cost vanished or went non-finite at side 2^-" +
                                std::to_string(m) + " (beyond extended-precision range)");
        const long double per_vector = std::ldexp(per_cube, count_log2);
        const long double contribution = per_vector * static_cast<long double>(vectors);
        if (std::isinf(contribution))
            throw OverflowError("cover_cost: contribution overflows at k_max " + std::to_string(m));
        acc.add(contribution);
        cost.by_k_max.push_back({m, vectors, count_log2, contribution});
    }
    cost.total = acc.value();
    return cost;
}

CoverCost cover_cost(int N, int d, const DimensionFunction& f) {
    return cover_cost(N, d, [&f](long double side) { return f.eval(side); });
}

CoverCost cover_cost(int N, int d, double s) {
    return cover_cost(N, d, DimensionFunction::power(s));
}

std::vector<Hypercube> materialize_cover(int N, int d, std::uint64_t cap) {
    validate_dims(d, N, "materialize_cover");
    const int t = N - d;
    // Exact total count first, so the budget error can name it.
    unsigned __int128 total = 0;
    const int m_lo = t == 0 ? 0 : (t + d - 1) / d;
    for (int m = m_lo; m <= std::max(m_lo, t); ++m) {
        const std::uint64_t vectors = composition_count_with_max(static_cast<std::uint64_t>(t), d,
                                                                 static_cast<std::uint64_t>(m));
        const int count_log2 = d * m - t + d;
        if (count_log2 >= 64)
            throw OverflowError("materialize_cover: per-box cube count exceeds 64 bits");
        total += static_cast<unsigned __int128>(vectors) * (std::uint64_t{1} << count_log2);
    }
    if (total > cap) {
        std::string msg = "materialize_cover: cover holds ";
        // Render the 128-bit count exactly.
        std::string digits;
        unsigned __int128 v = total;
        do {
            digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(v % 10)));
            v /= 10;
        } while (v != 0);
        msg += digits + " cubes, above the cap of " + std::to_string(cap);
        throw BudgetError(msg);
    }

    std::vector<Hypercube> cubes;
    cubes.reserve(static_cast<std::size_t>(total));
    ExponentSet set(N, d);
    set.for_each([&](const ExponentVector& ev) {
        // Box prod_i [-2^-k_i, 2^-k_i]; axis i carries 2^(k_max - k_i + 1)
        // cells of side 2^-k_max.  Centers on the common denominator
        // 2^(k_max+1): (2j + 1 - 2^(k_max - k_i + 1)) / 2^(k_max+1).
        const int km = ev.k_max;
        std::vector<std::int64_t> cells(static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i)
            cells[static_cast<std::size_t>(i)] = std::int64_t{1}
                                                 << (km - ev.k[static_cast<std::size_t>(i)] + 1);
        std::vector<std::int64_t> idx(static_cast<std::size_t>(d), 0);
        while (true) {
            Hypercube cube;
            cube.side_log2 = km;
            cube.center.reserve(static_cast<std::size_t>(d));
            for (int i = 0; i < d; ++i) {
                const std::int64_t j = idx[static_cast<std::size_t>(i)];
                cube.center.push_back(Dyadic{2 * j + 1 - cells[static_cast<std::size_t>(i)], km + 1});
            }
            cubes.push_back(std::move(cube));
            int axis = d - 1;
            while (axis >= 0) {
                if (++idx[static_cast<std::size_t>(axis)] < cells[static_cast<std::size_t>(axis)])
                    break;
                idx[static_cast<std::size_t>(axis)] = 0;
                --axis;
            }
            if (axis < 0)
                break;
        }
    });
    return cubes;
}

bool cube_contains(const Hypercube& cube, std::span<const double> x) {
    if (cube.center.size() != x.size())
        throw DomainError("cube_contains: dimension mismatch");
    // |x_i - c_i| <= side/2 scaled by 2^(side_log2+1):
    // |x_i * 2^(m+1) - num_i| <= 1, exact in extended precision.
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (cube.center[i].log2_den != cube.side_log2 + 1)
            throw DomainError("cube_contains: center denominator inconsistent with side");
        const long double scaled = std::ldexp(static_cast<long double>(x[i]), cube.side_log2 + 1);
        const long double diff = scaled - static_cast<long double>(cube.center[i].num);
        if (std::fabs(diff) > 1.0L)
            return false;
    }
    return true;
}

ExponentVector point_to_box(std::span<const double> x, const HyperbolaRegion& region) {
    if (static_cast<int>(x.size()) != region.d())
        throw DomainError("point_to_box: dimension mismatch");
    if (!region.contains(x))
        throw DomainError("point_to_box: point lies outside the region");
    const int d = region.d();
    const int t = region.N() - d;
    ExponentVector ev;
    ev.k.resize(static_cast<std::size_t>(d));
    long sum = 0;
    for (int i = 0; i < d; ++i) {
        int ki;
        if (x[static_cast<std::size_t>(i)] == 0.0)
            ki = t;
        else
            ki = std::min(largest_pow2_exponent(x[static_cast<std::size_t>(i)]), t);
        ev.k[static_cast<std::size_t>(i)] = ki;
        sum += ki;
    }
    // Membership guarantees sum >= t; shed the excess from the currently
    // largest coordinate, ties toward the lowest index.
    while (sum > t) {
        int arg = 0;
        for (int i = 1; i < d; ++i)
            if (ev.k[static_cast<std::size_t>(i)] > ev.k[static_cast<std::size_t>(arg)])
                arg = i;
        ev.k[static_cast<std::size_t>(arg)] -= 1;
        --sum;
    }
    ev.k_max = *std::max_element(ev.k.begin(), ev.k.end());
    ev.count_log2 = d * ev.k_max - t + d;
    // The result must still dominate the point coordinatewise.
    for (int i = 0; i < d; ++i) {
        const double bound = std::ldexp(1.0, -ev.k[static_cast<std::size_t>(i)]);
        if (std::fabs(x[static_cast<std::size_t>(i)]) > bound)
            throw Error("point_to_box: internal reduction left the point uncovered");
    }
    return ev;
}

ScalingReport cost_scaling_report(int d, double s, int N_min, int N_max) {
    validate_dims(d, N_min, "cost_scaling_report");
    if (N_max < N_min)
        throw DomainError("cost_scaling_report: N_max must be >= N_min");
    ScalingReport rep;
    std::vector<long double> xs, ys;
    for (int N = N_min; N <= N_max; ++N) {
        const CoverCost cost = cover_cost(N, d, s);
        ScalingRow row;
        row.N = N;
        row.cost = cost.total;
        // r^(s - d + 1) = 2^(-N (s - d + 1))
        const long double scale_log2 = -static_cast<long double>(N) * (static_cast<long double>(s) - d + 1);
        row.ratio = cost.total / std::exp2(scale_log2);
        xs.push_back(-static_cast<long double>(N));
        ys.push_back(std::log2(cost.total));
        row.slope_so_far = xs.size() >= 2 ? linear_fit(xs, ys).slope : 0.0L;
        rep.rows.push_back(row);
        if (N == N_max)
            rep.profile = cost.by_k_max;
    }
    rep.slope = rep.rows.back().slope_so_far;
    rep.ratio_sup = rep.rows.front().ratio;
    rep.ratio_inf = rep.rows.front().ratio;
    for (const auto& row : rep.rows) {
        rep.ratio_sup = std::max(rep.ratio_sup, row.ratio);
        rep.ratio_inf = std::min(rep.ratio_inf, row.ratio);
    }
    return rep;
}

} // namespace multcover
