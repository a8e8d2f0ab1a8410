#pragma once

// Closed intervals of doubles with outward rounding. Every operation widens
// the rounded result by one ulp on each side, so the true real value is
// always enclosed regardless of the FPU rounding mode.

#include <cmath>
#include <cstdint>
#include <limits>

namespace pol {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  static Interval point(double v) { return {v, v}; }

  static double down(double v) { return std::nextafter(v, -std::numeric_limits<double>::infinity()); }
  static double up(double v) { return std::nextafter(v, std::numeric_limits<double>::infinity()); }

  /// Encloses 1/n for a positive integer n.
  static Interval reciprocal(std::int64_t n) {
    const double q = 1.0 / static_cast<double>(n);
    return {down(q), up(q)};
  }

  /// Encloses 1/(a*b) for positive a, b.
  static Interval reciprocal_product(double a, double b) {
    const double lo_prod = down(a * b);
    const double hi_prod = up(a * b);
    return {down(1.0 / hi_prod), up(1.0 / lo_prod)};
  }

  /// Encloses log(x) for x > 0; libm log is accurate to well under 2 ulps.
  static Interval log(double x) {
    const double v = std::log(x);
    return {down(down(v)), up(up(v))};
  }

  friend Interval operator+(Interval a, Interval b) { return {down(a.lo + b.lo), up(a.hi + b.hi)}; }

  /// Division by a positive integer.
  friend Interval operator/(Interval a, std::int64_t d) {
    const double dd = static_cast<double>(d);
    return {down(a.lo / dd), up(a.hi / dd)};
  }

  double mid() const { return 0.5 * (lo + hi); }

  /// Certainly >= / certainly < comparisons.
  bool certainly_ge(Interval other) const { return lo >= other.hi; }
  bool certainly_gt(Interval other) const { return lo > other.hi; }
  bool certainly_lt(Interval other) const { return hi < other.lo; }
};

}  // namespace pol
