#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "multcover/errors.hpp"

namespace multcover {

// An approximating-speed function psi : {1, 2, ...} -> (0, inf).  The
// symbolic family is psi(q) = c * q^-a * (log q)^-b, evaluated with q clamped
// below at q0 (default 2) so log factors stay positive and finite.  A raw
// callable can be wrapped instead; symbolic-only operations then refuse it or
// fall back to sampling heuristics.
class ApproximatingFunction {
  public:
    static ApproximatingFunction power_law(double c, double a, double b = 0.0, std::uint64_t q0 = 2);
    static ApproximatingFunction constant(double c) { return power_law(c, 0.0, 0.0); }
    static ApproximatingFunction from_callable(std::function<double(std::uint64_t)> fn,
                                               bool monotone_nonincreasing);

    // evaluate at integer q >= 1 (values below q0 evaluate at q0).
    double operator()(std::uint64_t q) const;

    [[nodiscard]] bool symbolic() const { return !raw_; }
    [[nodiscard]] double scale() const { return require_symbolic(), c_; }
    [[nodiscard]] double power() const { return require_symbolic(), a_; }
    [[nodiscard]] double log_power() const { return require_symbolic(), b_; }
    [[nodiscard]] std::uint64_t clamp_point() const { return q0_; }
    [[nodiscard]] bool monotone_nonincreasing() const { return monotone_; }

  private:
    ApproximatingFunction() = default;
    void require_symbolic() const {
        if (raw_)
            throw DomainError("ApproximatingFunction: symbolic parameters requested from a raw callable");
    }

    double c_ = 1.0, a_ = 0.0, b_ = 0.0;
    std::uint64_t q0_ = 2;
    bool monotone_ = false;
    std::function<double(std::uint64_t)> raw_;
};

// A dimension function f(x) = x^s * L(x)^alpha * (log L(x))^beta with
// L(x) = max(log(1/x), 2); the clamp keeps iterated logs positive on (0, 1].
// s is the leading power, alpha/beta the log corrections.
class DimensionFunction {
  public:
    static DimensionFunction power(double s) { return power_log(s, 0.0, 0.0); }
    static DimensionFunction power_log(double s, double alpha, double beta = 0.0);

    [[nodiscard]] double operator()(double x) const { return static_cast<double>(eval(x)); }
    // Extended-precision path used by cost accumulation.
    [[nodiscard]] long double eval(long double x) const;

    [[nodiscard]] double s() const { return s_; }
    [[nodiscard]] double alpha() const { return alpha_; }
    [[nodiscard]] double beta() const { return beta_; }
    [[nodiscard]] bool pure_power() const { return alpha_ == 0.0 && beta_ == 0.0; }
    // Log clamp threshold: logs are frozen for x above exp(-2).
    [[nodiscard]] static double clamp_point() { return std::exp(-2.0); }

  private:
    DimensionFunction(double s, double alpha, double beta) : s_(s), alpha_(alpha), beta_(beta) {}
    double s_ = 1.0, alpha_ = 0.0, beta_ = 0.0;
};

// The radial profile g(r) = f(r) / r^(d-1) obtained by slicing a
// d-dimensional product measure down to one distinguished axis.
class SlicedDimensionFunction {
  public:
    SlicedDimensionFunction(DimensionFunction f, int d);

    [[nodiscard]] long double eval(long double r) const;
    [[nodiscard]] double operator()(double r) const { return static_cast<double>(eval(r)); }
    // The symbolic profile: leading power s - (d-1), same log corrections.
    [[nodiscard]] DimensionFunction symbolic_profile() const;
    [[nodiscard]] const DimensionFunction& parent() const { return f_; }
    [[nodiscard]] int d() const { return d_; }

  private:
    DimensionFunction f_;
    int d_;
};

struct GridSpec {
    double x_min = 8.673617379884035e-19; // 2^-60
    int points_per_octave = 2;
};

struct ConditionIResult {
    bool holds = false;
    double constant = 0.0; // empirical sup of f(y) (x/y)^s / f(x) over grid pairs x < y
    double s = 0.0;
    std::optional<std::pair<double, double>> witness; // (x, y) if the sup misbehaves
};

// Quasi-power-law check: f(y)/f(x) <= C (y/x)^s for 0 < x <= y <= 1, with s
// required to sit strictly between d-1 and d.  Throws OutOfRangeError when s
// is outside that open interval (the measure question is then trivial).
ConditionIResult check_quasi_power_law(const DimensionFunction& f, int d, GridSpec grid = {});

struct ConditionIIResult {
    bool holds = false;
    std::optional<std::pair<double, double>> witness; // (x, y) with x < y violating monotonicity
};

// Slice-monotonicity check: x -> x^-(d-1) f(x) must be non-decreasing on
// (0, 1].  Decided symbolically on the clamped family and verified on a
// geometric grid; a violation reports the witnessing pair.
ConditionIIResult check_slice_monotonicity(const DimensionFunction& f, int d, GridSpec grid = {});

struct TauEstimate {
    double value = 0.0;
    bool exact = false; // true when read off symbolic parameters
    std::string note;
};

// Lower order at infinity of 1/psi: liminf log(1/psi(q)) / log q.  Exact (= a)
// for the symbolic family; a sampling heuristic over [Q/10, Q] otherwise.
TauEstimate lower_order_tau(const ApproximatingFunction& psi, std::uint64_t Q = 10000);

} // namespace multcover
