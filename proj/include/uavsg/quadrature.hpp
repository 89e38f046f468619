#pragma once

#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "uavsg/error.hpp"

namespace uavsg {

/// Tolerances and truncation controls shared by every numerical integral of
/// the analytic engine.
struct QuadratureSpec {
  double rel_tol = 1e-6;
  double abs_tol = 1e-13;
  /// Probability mass of the contact distance kept before truncating r0.
  double r0_truncation_quantile = 1.0 - 1e-8;
  unsigned max_depth = 15;

  void validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
      throw ValidationError("QuadratureSpec: tolerances must be positive");
    if (!(r0_truncation_quantile > 0.999 && r0_truncation_quantile < 1.0))
      throw ValidationError("QuadratureSpec: r0_truncation_quantile must lie in (0.999, 1)");
    if (max_depth == 0) throw ValidationError("QuadratureSpec: max_depth must be positive");
  }

  /// Spec for an integral nested inside another one.
  QuadratureSpec inner() const {
    QuadratureSpec s = *this;
    s.rel_tol = rel_tol * 0.1;
    s.abs_tol = abs_tol * 0.1;
    return s;
  }
};

inline std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

/// Adaptive 15-point Gauss-Kronrod integral of f over [a, b].
/// Throws QuadratureFailure when the error estimate exceeds
/// max(abs_tol, rel_tol * L1).
template <class F>
double integrate(F&& f, double a, double b, const QuadratureSpec& q, const char* what = "integral") {
  if (a == b) return 0.0;
  double error = 0.0;
  double l1 = 0.0;
  const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      f, a, b, q.max_depth, 0.25 * q.rel_tol, &error, &l1);
  if (!std::isfinite(value))
    throw QuadratureFailure(std::string(what) + ": non-finite result");
  const double allowed = std::max(q.abs_tol, q.rel_tol * l1);
  if (error > allowed)
    throw QuadratureFailure(std::string(what) + ": error estimate " + fmt_g(error) + " (L1 " + fmt_g(l1) + ")" +
                            " exceeds tolerance " + fmt_g(allowed));
  return value;
}

/// Integral of f over [a, b] for integrands with square-root behaviour at
/// both ends, via x = a + (b - a)(1 - cos t) / 2.
template <class F>
double integrate_sqrt_ends(F&& f, double a, double b, const QuadratureSpec& q, const char* what = "integral") {
  if (a == b) return 0.0;
  const double h = 0.5 * (b - a);
  auto g = [&](double t) { return f(a + h * (1.0 - std::cos(t))) * h * std::sin(t); };
  return integrate(g, 0.0, std::acos(-1.0), q, what);
}

}  // namespace uavsg
