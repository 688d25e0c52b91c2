#pragma once

#include <cmath>

#include "dmt/error.hpp"

namespace dmt::detail {

inline double normal_cdf_impl(double z) {
  return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

/// Acklam's rational approximation of the standard normal quantile,
/// relative error below 1.2e-9 over (0, 1).
inline double normal_quantile_impl(double p) {
  if (!(p > 0.0 && p < 1.0)) throw Error("normal_quantile: p must be in (0,1)");

  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > 1.0 - p_low) {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double q = p - 0.5;
  const double r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

/// Upper confidence bound on the extra errors expected at a leaf that
/// misclassified e of N training instances (the C4.5 pessimistic bound).
inline double added_errors(double n, double e, double cf) {
  if (cf > 0.5) cf = 0.5;
  if (e < 1.0) {
    const double base = n * (1.0 - std::pow(cf, 1.0 / n));
    if (e <= 0.0) return base;
    return base + e * (added_errors(n, 1.0, cf) - base);
  }
  if (e + 0.5 >= n) return n - e > 0.0 ? n - e : 0.0;
  const double z = normal_quantile_impl(1.0 - cf);
  const double f = (e + 0.5) / n;
  const double r =
      (f + z * z / (2.0 * n) + z * std::sqrt(f / n - f * f / n + z * z / (4.0 * n * n))) /
      (1.0 + z * z / n);
  return r * n - e;
}

}  // namespace dmt::detail
