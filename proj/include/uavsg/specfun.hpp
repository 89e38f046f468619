#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "uavsg/error.hpp"

namespace uavsg {

namespace specfun_detail {

inline constexpr int kMaxTerms = 1000000;
inline constexpr double kSeriesEps = 1e-16;

// Sum of b * sum_n (-y)^n / (b + n), valid for 0 <= y < 1.
inline double incomplete_beta_series(double b, double y) {
  double sum = 1.0;
  double power = 1.0;
  for (int n = 1; n < kMaxTerms; ++n) {
    power *= -y;
    const double term = power * b / (b + n);
    sum += term;
    if (std::abs(term) <= kSeriesEps * std::abs(sum)) return sum;
  }
  throw NonConvergence("hypergeometric direct series did not converge");
}

// 2F1(1, 1; b + 1; w) for 0 <= w < 1.
inline double pfaff_series(double b, double w) {
  double sum = 1.0;
  double term = 1.0;
  for (int n = 0; n < kMaxTerms; ++n) {
    term *= (n + 1.0) / (b + 1.0 + n) * w;
    sum += term;
    if (term <= kSeriesEps * sum) return sum;
  }
  throw NonConvergence("hypergeometric Pfaff series did not converge");
}

// I(f) = int_0^1 t^(f-1) / (1 + y t) dt for 0 < f < 1 and y > 1, by
// splitting the Mellin integral over (0, inf) at t = 1.
inline double mellin_tail_form(double f, double y) {
  const double full = std::pow(y, -f) * std::numbers::pi / std::sin(std::numbers::pi * f);
  double tail = 0.0;
  double power = 1.0 / y;
  for (int n = 0; n < kMaxTerms; ++n) {
    const double term = power / (n + 1.0 - f);
    tail += (n % 2 == 0) ? term : -term;
    if (term <= kSeriesEps * std::abs(tail)) return full - tail;
    power /= y;
  }
  throw NonConvergence("hypergeometric reflection series did not converge");
}

// I(f) with u = t^f, which keeps the integrand bounded near f = 1.
inline double quadrature_form(double f, double y) {
  auto g = [=](double u) { return 1.0 / (1.0 + y * std::pow(u, 1.0 / f)); };
  double err = 0.0;
  const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, 0.0, 1.0, 20, 1e-14, &err);
  return v / f;
}

// I(b) = int_0^1 t^(b-1) / (1 + y t) dt for y > 2.
inline double beta_integral_large_y(double b, double y) {
  double whole = std::floor(b);
  double f = b - whole;
  if (f == 0.0) {
    f = 1.0;
    whole -= 1.0;
  }
  double v;
  if (f == 1.0)
    v = std::log1p(y) / y;
  else if (1.0 - f < 1e-3)
    v = quadrature_form(f, y);
  else
    v = mellin_tail_form(f, y);
  // I(s + 1) = (1/s - I(s)) / y, which damps errors for y > 1.
  for (double s = f; s < b - 0.5; s += 1.0) v = (1.0 / s - v) / y;
  return v;
}

}  // namespace specfun_detail

/// Standard error function.
inline double erf(double x) { return std::erf(x); }

/// 2F1(1, b; b + 1; -y) for b > 0, y >= 0. Equals b * int_0^1 t^(b-1)/(1+yt) dt.
inline double hyp2f1_unit(double b, double y) {
  using namespace specfun_detail;
  if (!(b > 0.0) || !std::isfinite(b)) throw ValidationError("hyp2f1_unit: b must be positive and finite");
  if (!(y >= 0.0)) throw ValidationError("hyp2f1_unit: y must be nonnegative");
  if (y == 0.0) return 1.0;
  if (std::isinf(y)) return 0.0;
  if (y <= 0.5) return incomplete_beta_series(b, y);
  if (y <= 2.0) return pfaff_series(b, y / (1.0 + y)) / (1.0 + y);
  return b * beta_integral_large_y(b, y);
}

/// Gauss hypergeometric function 2F1(a, b; c; z) for z <= 0.
inline double gauss_2f1_neg(double a, double b, double c, double z) {
  using namespace specfun_detail;
  if (!(z <= 0.0)) throw ValidationError("gauss_2f1_neg: z must be nonpositive");
  if (c <= 0.0 && c == std::floor(c)) throw ValidationError("gauss_2f1_neg: c is a nonpositive integer");
  if (z == 0.0) return 1.0;
  if (a == 1.0 && c == b + 1.0 && b > 0.0) return hyp2f1_unit(b, -z);
  if (b == 1.0 && c == a + 1.0 && a > 0.0) return hyp2f1_unit(a, -z);

  auto series = [](double a_, double b_, double c_, double x) {
    double sum = 1.0;
    double term = 1.0;
    for (int n = 0; n < kMaxTerms; ++n) {
      term *= (a_ + n) * (b_ + n) / ((c_ + n) * (n + 1.0)) * x;
      sum += term;
      if (term == 0.0) return sum;
      const double ratio = std::abs((a_ + n + 1) * (b_ + n + 1) / ((c_ + n + 1) * (n + 2.0)) * x);
      if (ratio < 1.0 && std::abs(term) <= kSeriesEps * std::abs(sum)) return sum;
    }
    throw NonConvergence("gauss_2f1_neg: series did not converge");
  };
  if (z >= -0.5) return series(a, b, c, z);
  const double w = z / (z - 1.0);
  return std::pow(1.0 - z, -a) * series(a, c - b, c, w);
}

/// omega_1(alpha, y) = 2F1(1, 1 - 2/alpha; 2 - 2/alpha; -y).
inline double omega1(double alpha, double y) {
  if (!(alpha > 2.0)) throw ValidationError("omega1: alpha must exceed 2");
  return hyp2f1_unit(1.0 - 2.0 / alpha, y);
}

/// omega_2(alpha, y) = 2F1(1, 2/alpha; 1 + 2/alpha; -y).
inline double omega2(double alpha, double y) {
  if (!(alpha > 2.0)) throw ValidationError("omega2: alpha must exceed 2");
  return hyp2f1_unit(2.0 / alpha, y);
}

/// Interference kernel 2 q_a tau omega_1(alpha, tau) / (alpha - 2).
inline double delta_kernel(double alpha, double tau, double q_a) {
  if (!(tau > 0.0)) throw ValidationError("delta_kernel: tau must be positive");
  if (!(q_a >= 0.0 && q_a <= 1.0)) throw ValidationError("delta_kernel: q_a must lie in [0, 1]");
  return 2.0 * q_a * tau * omega1(alpha, tau) / (alpha - 2.0);
}

/// Psi(x) = x^2 2F1(1, 2/z; 1 + 2/z; -b x^z).
inline double psi(double x, double b, double z) {
  if (!(x >= 0.0)) throw ValidationError("psi: x must be nonnegative");
  if (!(b > 0.0) || !(z > 0.0)) throw ValidationError("psi: b and z must be positive");
  if (x == 0.0) return 0.0;
  return x * x * hyp2f1_unit(2.0 / z, b * std::pow(x, z));
}

/// Truncated pathloss integral 2 int_0^r x / (1 + x^alpha / s) dx = r^2 omega_2(alpha, r^alpha / s).
inline double pathloss_disk_integral(double alpha, double r, double s) {
  if (r == 0.0) return 0.0;
  if (std::isinf(r)) {
    const double b = 2.0 / alpha;
    return std::pow(s, b) * std::numbers::pi * b / std::sin(std::numbers::pi * b);
  }
  return r * r * omega2(alpha, std::pow(r, alpha) / s);
}

}  // namespace uavsg
