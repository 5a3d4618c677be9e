#include "multcover/numeric.hpp"

#include <algorithm>
#include <cmath>

namespace multcover {

LinearFit linear_fit(std::span<const long double> x, std::span<const long double> y) {
    if (x.size() != y.size() || x.size() < 2)
        throw DomainError("linear_fit: need at least two points with matching sizes");
    const auto n = static_cast<long double>(x.size());
    Accumulator sx, sy, sxx, sxy;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx.add(x[i]);
        sy.add(y[i]);
        sxx.add(x[i] * x[i]);
        sxy.add(x[i] * y[i]);
    }
    const long double det = n * sxx.value() - sx.value() * sx.value();
    if (det == 0.0L)
        throw DomainError("linear_fit: degenerate abscissae");
    LinearFit fit;
    fit.slope = (n * sxy.value() - sx.value() * sy.value()) / det;
    fit.intercept = (sy.value() - fit.slope * sx.value()) / n;
    return fit;
}

std::vector<long double> fit_linear_model(const std::vector<std::vector<long double>>& rows,
                                          std::span<const long double> y) {
    if (rows.empty() || rows.size() != y.size())
        throw DomainError("fit_linear_model: empty system or size mismatch");
    const std::size_t p = rows.front().size();
    for (const auto& r : rows)
        if (r.size() != p)
            throw DomainError("fit_linear_model: ragged rows");
    // Normal equations A^T A c = A^T y.
    std::vector<std::vector<long double>> m(p, std::vector<long double>(p + 1, 0.0L));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t a = 0; a < p; ++a) {
            for (std::size_t b = 0; b < p; ++b)
                m[a][b] += rows[i][a] * rows[i][b];
            m[a][p] += rows[i][a] * y[i];
        }
    }
    // Gaussian elimination with partial pivoting.
    for (std::size_t col = 0; col < p; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < p; ++r)
            if (std::fabs(m[r][col]) > std::fabs(m[piv][col]))
                piv = r;
        if (m[piv][col] == 0.0L)
            throw DomainError("fit_linear_model: singular normal equations");
        std::swap(m[col], m[piv]);
        for (std::size_t r = 0; r < p; ++r) {
            if (r == col)
                continue;
            const long double factor = m[r][col] / m[col][col];
            for (std::size_t c = col; c <= p; ++c)
                m[r][c] -= factor * m[col][c];
        }
    }
    std::vector<long double> coeffs(p);
    for (std::size_t i = 0; i < p; ++i)
        coeffs[i] = m[i][p] / m[i][i];
    return coeffs;
}

WilsonInterval wilson_interval(std::uint64_t hits, std::uint64_t trials, double z) {
    if (trials == 0)
        throw DomainError("wilson_interval: zero trials");
    if (hits > trials)
        throw DomainError("wilson_interval: hits exceed trials");
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(hits) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half = (z / denom) * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
    WilsonInterval w;
    w.low = std::max(0.0, center - half);
    w.high = std::min(1.0, center + half);
    return w;
}

std::uint64_t checked_binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n)
        return 0;
    k = std::min(k, n - k);
    unsigned __int128 acc = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        acc *= (n - k + i);
        acc /= i; // exact: C(n-k+i, i) is an integer and the running value equals it
        if (acc > static_cast<unsigned __int128>(UINT64_MAX))
            throw OverflowError("checked_binomial: value exceeds 64 bits");
    }
    return static_cast<std::uint64_t>(acc);
}

std::uint64_t bounded_composition_count(std::uint64_t t, int d, std::uint64_t m) {
    if (d < 1)
        throw DomainError("bounded_composition_count: d must be >= 1");
    // Sum_{j} (-1)^j C(d, j) C(t - j(m+1) + d - 1, d - 1), while t - j(m+1) >= 0.
    __int128 total = 0;
    for (int j = 0; j <= d; ++j) {
        const unsigned __int128 shift = static_cast<unsigned __int128>(j) * (m + 1);
        if (shift > t)
            break;
        const std::uint64_t rem = t - static_cast<std::uint64_t>(shift);
        const std::uint64_t ways =
            checked_binomial(rem + static_cast<std::uint64_t>(d) - 1, static_cast<std::uint64_t>(d) - 1);
        const std::uint64_t choose = checked_binomial(static_cast<std::uint64_t>(d), static_cast<std::uint64_t>(j));
        const unsigned __int128 prod = static_cast<unsigned __int128>(ways) * choose;
        if (prod > static_cast<unsigned __int128>(UINT64_MAX) * 4)
            throw OverflowError("bounded_composition_count: intermediate exceeds safe range");
        total += (j % 2 == 0) ? static_cast<__int128>(prod) : -static_cast<__int128>(prod);
    }
    if (total < 0 || total > static_cast<__int128>(UINT64_MAX))
        throw OverflowError("bounded_composition_count: result outside uint64 range");
    return static_cast<std::uint64_t>(total);
}

std::uint64_t composition_count_with_max(std::uint64_t t, int d, std::uint64_t m) {
    if (m == 0)
        return t == 0 ? 1 : 0;
    return bounded_composition_count(t, d, m) - bounded_composition_count(t, d, m - 1);
}

} // namespace multcover
