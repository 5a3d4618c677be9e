#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "multcover/errors.hpp"

namespace multcover {

// Neumaier-compensated accumulator.  Sums long doubles with an error term so
// that adding many small contributions to a large running total does not lose
// them.  value() folds the compensation back in.
class Accumulator {
  public:
    void add(long double x) {
        long double t = sum_ + x;
        if (std::fabs(sum_) >= std::fabs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    [[nodiscard]] long double value() const { return sum_ + comp_; }

  private:
    long double sum_ = 0.0L;
    long double comp_ = 0.0L;
};

struct LinearFit {
    long double slope = 0.0L;
    long double intercept = 0.0L;
};

// Ordinary least squares y ~ intercept + slope * x.
LinearFit linear_fit(std::span<const long double> x, std::span<const long double> y);

// Least squares for a small general linear model: rows[i] holds the basis
// values for observation i, y[i] the response.  Returns the coefficient
// vector, solving the normal equations with partial pivoting.  Throws
// DomainError on a singular system.
std::vector<long double> fit_linear_model(const std::vector<std::vector<long double>>& rows,
                                          std::span<const long double> y);

struct WilsonInterval {
    double low = 0.0;
    double high = 0.0;
};

// Wilson score interval for a binomial proportion (default z ~ 95%).
WilsonInterval wilson_interval(std::uint64_t hits, std::uint64_t trials, double z = 1.959963984540054);

// Binomial coefficient with overflow checking (throws OverflowError rather
// than wrapping).
std::uint64_t checked_binomial(std::uint64_t n, std::uint64_t k);

// Number of vectors k in Z^d with k_i >= 0, sum k_i = t, and max k_i <= m.
// Inclusion-exclusion over the coordinates exceeding m.
std::uint64_t bounded_composition_count(std::uint64_t t, int d, std::uint64_t m);

// Number of such vectors with max k_i == m exactly.
std::uint64_t composition_count_with_max(std::uint64_t t, int d, std::uint64_t m);

} // namespace multcover
