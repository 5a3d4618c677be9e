#include "multcover/dyadic.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>

namespace multcover {

double Dyadic::to_double() const {
    return std::ldexp(static_cast<double>(num), -log2_den);
}

std::string Dyadic::to_string() const {
    std::int64_t p = num;
    int m = log2_den;
    if (p == 0)
        return "0";
    while (m > 0 && p % 2 == 0) {
        p /= 2;
        --m;
    }
    if (m == 0)
        return std::to_string(p);
    return std::to_string(p) + "/2^" + std::to_string(m);
}

int largest_pow2_exponent(double x) {
    x = std::fabs(x);
    if (!(x > 0.0) || x > 1.0)
        throw DomainError("largest_pow2_exponent: need 0 < |x| <= 1");
    int e;
    const double m = std::frexp(x, &e); // x = m * 2^e, m in [0.5, 1)
    // x <= 2^-k  <=>  k <= -log2(x).  With x = m*2^e: if m == 0.5 then
    // x = 2^(e-1) and k = 1-e; otherwise 2^(e-1) < x < 2^e and k = -e.
    return (m == 0.5) ? 1 - e : -e;
}

ProductOrder compare_product_pow2(std::span<const double> xs, int N) {
    // Accumulate the product of the |x_i| as P * 2^exp with P an integer kept
    // in [2^52, 2^117); `sticky` records that some nonzero low bits were
    // shifted out, i.e. the true value lies strictly above P * 2^exp.
    unsigned __int128 P = 1;
    long exp = 0;
    bool sticky = false;
    for (double x : xs) {
        x = std::fabs(x);
        if (x == 0.0)
            return ProductOrder::less;
        if (std::isnan(x) || std::isinf(x))
            throw DomainError("compare_product_pow2: non-finite factor");
        int e;
        const double m = std::frexp(x, &e);
        const auto mant = static_cast<std::uint64_t>(std::ldexp(m, 53)); // in [2^52, 2^53)
        // Renormalize so the next multiply cannot overflow 128 bits.
        while (P >= (static_cast<unsigned __int128>(1) << 64)) {
            if (P & 1)
                sticky = true;
            P >>= 1;
            ++exp;
        }
        P *= mant;
        exp += e - 53;
    }
    const auto high_word = static_cast<std::uint64_t>(P >> 64);
    const int bits = high_word != 0 ? 64 + std::bit_width(high_word)
                                    : std::bit_width(static_cast<std::uint64_t>(P));
    // floor(log2) of the truncated product:
    const long hi = exp + bits - 1;
    const long target = -static_cast<long>(N);
    if (hi > target)
        return ProductOrder::greater;
    if (hi < target)
        return ProductOrder::less; // even with sticky: value < (P+1)*2^exp <= 2^(hi+1) <= 2^target
    // Same leading exponent: equality iff P is a power of two and nothing was
    // shifted out.
    const bool pow2 = (P & (P - 1)) == 0;
    if (pow2 && !sticky)
        return ProductOrder::equal;
    return ProductOrder::greater;
}

} // namespace multcover
