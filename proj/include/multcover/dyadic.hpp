#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "multcover/errors.hpp"

namespace multcover {

// Exact dyadic rational num / 2^log2_den with |num| < 2^62, log2_den >= 0.
// Used for cube centers so geometry can be reported and re-checked without
// rounding.
struct Dyadic {
    std::int64_t num = 0;
    int log2_den = 0;

    [[nodiscard]] double to_double() const;
    // Canonical "p/2^m" rendering (reduced; "p" when the denominator is 1).
    [[nodiscard]] std::string to_string() const;

    friend bool operator==(const Dyadic&, const Dyadic&) = default;
};

// Largest integer k with |x| <= 2^-k.  Requires 0 < |x| <= 1.  Exact: uses
// the binary representation of x, no logarithms.
int largest_pow2_exponent(double x);

enum class ProductOrder { less, equal, greater };

// Exact three-way comparison of prod_i |x_i| against 2^-N (N may be any int,
// including <= 0).  Works on the binary representations with a sticky bit for
// shifted-out mantissa bits, so the verdict is exact for all finite doubles.
// A zero factor makes the product 0, which compares less.
ProductOrder compare_product_pow2(std::span<const double> xs, int N);

} // namespace multcover
