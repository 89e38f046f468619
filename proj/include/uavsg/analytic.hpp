#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "uavsg/association.hpp"
#include "uavsg/backhaul.hpp"
#include "uavsg/error.hpp"
#include "uavsg/model.hpp"
#include "uavsg/quadrature.hpp"
#include "uavsg/specfun.hpp"

namespace uavsg {

enum class Regime { backhaul_limited, backhaul_unlimited };

inline const char* to_string(Regime r) {
  return r == Regime::backhaul_limited ? "backhaul_limited" : "backhaul_unlimited";
}

struct AnalyticResult {
  double cp = 0.0;
  double st = 0.0;
  double c_b_used = kInf;
  Regime regime = Regime::backhaul_unlimited;
};

/// ST = lambda_a * CP * min{log2(1 + tau), C_b}.
inline AnalyticResult st_from_cp(double lambda_active, double cp, double tau, double c_b) {
  if (!(cp >= 0.0 && cp <= 1.0)) throw ValidationError("st_from_cp: cp must lie in [0, 1]");
  AnalyticResult r;
  r.cp = cp;
  r.c_b_used = c_b;
  const double rate = std::log2(1.0 + tau);
  r.regime = c_b < rate ? Regime::backhaul_limited : Regime::backhaul_unlimited;
  r.st = lambda_active * cp * std::min(rate, c_b);
  return r;
}

namespace analytic_detail {

// Upper integration limit for the contact distance r0.
inline double r0_cutoff(double lambda, const QuadratureSpec& q) {
  return std::sqrt(-std::log1p(-q.r0_truncation_quantile) / (kPi * lambda));
}

inline double r0_pdf(double lambda, double r) { return 2.0 * kPi * lambda * r * std::exp(-kPi * lambda * r * r); }

// Average of g(dh) over the altitude-difference band.
template <class G>
double over_altitude(const NetworkConfig& cfg, const QuadratureSpec& q, G&& g, const char* what) {
  const double lo = cfg.dh_lower();
  const double hi = cfg.dh_upper();
  if (lo == hi) return g(lo);
  return integrate(g, lo, hi, q, what) / (hi - lo);
}

// Integral over r0 in [a, b], split where the integrand has a kink.
template <class F>
double over_r0(F&& f, double a, double b, double kink, const QuadratureSpec& q, const char* what) {
  if (!(b > a)) return 0.0;
  if (kink > a && kink < b) return integrate(f, a, kink, q, what) + integrate(f, kink, b, q, what);
  return integrate(f, a, b, q, what);
}

}  // namespace analytic_detail

/// Interference kernel delta(alpha, tau, q_a) of the configuration.
inline double config_delta(const NetworkConfig& cfg) {
  return delta_kernel(cfg.alpha, cfg.tau, activation_probability(cfg.lambda_uav / cfg.lambda_gu));
}

/// Beam half-width that makes the projection radius C / sqrt(lambda_a).
inline double pae_half_beamwidth(double c, double delta_h, double lambda_active) {
  if (!(c > 0.0) || !(delta_h > 0.0) || !(lambda_active > 0.0))
    throw ValidationError("pae_half_beamwidth: arguments must be positive");
  return std::atan(c / (delta_h * std::sqrt(lambda_active)));
}

/// Projection radius of a UAV at altitude difference dh under the
/// configured beam policy.
inline double config_projection_radius(const NetworkConfig& cfg, double dh) {
  if (cfg.pae_c) return *cfg.pae_c / std::sqrt(active_density(cfg));
  return projection_radius(dh, cfg.half_beamwidth);
}

/// Omni Semi-RTNA coverage conditioned on the altitude difference.
inline double cp_semi_omni_conditional(const NetworkConfig& cfg, double dh, const QuadratureSpec& q = {}) {
  using namespace analytic_detail;
  cfg.validate();
  const double lam = cfg.lambda_uav;
  const double lam_a = active_density(cfg);
  const double a = cfg.alpha;
  const double rh = cfg.hover_radius;
  const QuadratureSpec qi = q.inner();
  auto inner = [&](double r0) {
    const double l2 = r0 <= rh ? dh * dh : (r0 - rh) * (r0 - rh) + dh * dh;
    auto over_theta = [&](double th) {
      const double d02 = r0 * r0 + rh * rh - 2.0 * r0 * rh * std::cos(th) + dh * dh;
      const double ratio = cfg.tau * std::pow(d02 / l2, a / 2.0);
      const double e = 2.0 * kPi * lam_a * ratio * l2 * omega1(a, ratio) / (a - 2.0);
      return std::exp(-e);
    };
    const double avg = rh == 0.0 ? over_theta(0.0) : integrate(over_theta, 0.0, kPi, qi, "cp_semi_omni theta") / kPi;
    return r0_pdf(lam, r0) * avg;
  };
  const double v = over_r0(inner, 0.0, r0_cutoff(lam, q), rh, q, "cp_semi_omni r0");
  return std::clamp(v, 0.0, 1.0);
}

/// Omni Semi-RTNA coverage probability.
inline double cp_semi_omni(const NetworkConfig& cfg, const QuadratureSpec& q = {}) {
  const QuadratureSpec qi = q.inner();
  return analytic_detail::over_altitude(
      cfg, q, [&](double dh) { return cp_semi_omni_conditional(cfg, dh, qi); }, "cp_semi_omni dh");
}

/// Upper bound on the conditional omni Semi-RTNA coverage at a fixed
/// altitude difference: exp(-pi lambda delta (dh^2 + R_h^2 / (1 + delta))) / (1 + delta).
inline double cp_semi_omni_upper_bound(const NetworkConfig& cfg, double delta_h) {
  cfg.validate();
  const double d = config_delta(cfg);
  const double rh = cfg.hover_radius;
  return std::exp(-kPi * cfg.lambda_uav * d * (delta_h * delta_h + rh * rh / (1.0 + d))) / (1.0 + d);
}

/// The closed form printed for the hover-radius bound. It is not a bound in
/// general and is kept for comparison only.
inline double cp_semi_omni_upper_bound_printed(const NetworkConfig& cfg, double delta_h) {
  cfg.validate();
  const double d = config_delta(cfg);
  const double lam = cfg.lambda_uav;
  const double rh = cfg.hover_radius;
  const double head = std::exp(-kPi * lam * d * (rh * rh + delta_h * delta_h)) / (1.0 + d);
  const double erf_arg = d * std::sqrt(kPi * lam) * rh / std::sqrt(1.0 + d);
  return head * (1.0 + d * kPi * std::sqrt(lam) * rh * (1.0 + erf(erf_arg)) / std::pow(1.0 + d, 1.5));
}

/// Conditional omni RTNA coverage given the contact distance and altitude
/// difference: exp(-pi lambda delta (r0^2 + dh^2)).
inline double rtna_omni_laplace(const NetworkConfig& cfg, double r0, double delta_h) {
  return std::exp(-kPi * cfg.lambda_uav * config_delta(cfg) * (r0 * r0 + delta_h * delta_h));
}

/// Mean of exp(-a h^2) for h uniform on [lo, hi].
inline double mean_gaussian_factor(double a, double lo, double hi) {
  if (lo == hi) return std::exp(-a * lo * lo);
  if (a * hi * hi < 1e-6) {
    const double w = hi - lo;
    const double m2 = (hi * hi * hi - lo * lo * lo) / (3.0 * w);
    const double m4 = (std::pow(hi, 5) - std::pow(lo, 5)) / (5.0 * w);
    return 1.0 - a * m2 + 0.5 * a * a * m4;
  }
  const double s = std::sqrt(a);
  const double diff = s * lo > 3.0 ? std::erfc(s * lo) - std::erfc(s * hi) : erf(s * hi) - erf(s * lo);
  return std::sqrt(kPi) * diff / (2.0 * s * (hi - lo));
}

/// Omni RTNA coverage probability; independent of the hover radius.
inline double cp_rtna_omni(const NetworkConfig& cfg) {
  cfg.validate();
  const double d = config_delta(cfg);
  return mean_gaussian_factor(kPi * cfg.lambda_uav * d, cfg.dh_lower(), cfg.dh_upper()) / (1.0 + d);
}

/// Directional Semi-RTNA coverage conditioned on the altitude difference.
inline double cp_semi_dir_conditional(const NetworkConfig& cfg, double dh, const QuadratureSpec& q = {}) {
  using namespace analytic_detail;
  cfg.validate();
  const double lam = cfg.lambda_uav;
  const double lam_a = active_density(cfg);
  const double a = cfg.alpha;
  const double rh = cfg.hover_radius;
  const double rp = config_projection_radius(cfg, dh);
  const QuadratureSpec qi = q.inner();
  const double pp = projection_probability_semi(lam, rh, rp, qi);
  if (pp == 0.0) return 0.0;
  const double rp_hat = std::isinf(rp) ? kInf : std::sqrt(rp * rp + dh * dh);

  auto inner = [&](double r0) {
    const double l = r0 >= rh ? std::sqrt((r0 - rh) * (r0 - rh) + dh * dh) : dh;
    const double frac = std::isinf(rp) ? 1.0 : projection_angle_fraction(r0, rh, rp);
    if (frac == 0.0) return 0.0;
    const double th_max = frac * kPi;
    auto over_theta = [&](double th) {
      const double d02 = r0 * r0 + rh * rh - 2.0 * r0 * rh * std::cos(th) + dh * dh;
      const double s = cfg.tau * std::pow(d02, a / 2.0);
      const double e = kPi * pp * lam_a * (pathloss_disk_integral(a, rp_hat, s) - pathloss_disk_integral(a, l, s));
      return std::exp(-std::max(e, 0.0));
    };
    const double sum = rh == 0.0 ? th_max * over_theta(0.0) : integrate(over_theta, 0.0, th_max, qi, "cp_semi_dir theta");
    return r0_pdf(lam, r0) * sum / kPi;
  };
  const double lo = std::isinf(rp) ? 0.0 : std::max(0.0, rh - rp);
  const double hi = std::min(rh + rp, r0_cutoff(lam, q));
  double v = 0.0;
  // Kinks at R_h (branch switch) and |R_p - R_h| (angular limit appears).
  std::vector<double> cuts{lo};
  for (double c : {rh, std::isinf(rp) ? -1.0 : std::abs(rp - rh)})
    if (c > lo && c < hi) cuts.push_back(c);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    if (cuts[i + 1] > cuts[i]) v += integrate_sqrt_ends(inner, cuts[i], cuts[i + 1], q, "cp_semi_dir r0");
  return std::clamp(v, 0.0, 1.0);
}

/// Directional Semi-RTNA coverage probability.
inline double cp_semi_dir(const NetworkConfig& cfg, const QuadratureSpec& q = {}) {
  const QuadratureSpec qi = q.inner();
  return analytic_detail::over_altitude(
      cfg, q, [&](double dh) { return cp_semi_dir_conditional(cfg, dh, qi); }, "cp_semi_dir dh");
}

/// RTNA projection probability at altitude difference dh.
inline double config_projection_probability_rtna(const NetworkConfig& cfg, double dh) {
  const double lam = cfg.rtna_projection_density == ProjectionDensity::active ? active_density(cfg) : cfg.lambda_uav;
  return projection_probability_rtna(lam, config_projection_radius(cfg, dh));
}

/// Directional RTNA coverage conditioned on the altitude difference.
inline double cp_rtna_dir_conditional(const NetworkConfig& cfg, double dh, const QuadratureSpec& q = {}) {
  using namespace analytic_detail;
  cfg.validate();
  const double lam = cfg.lambda_uav;
  const double lam_a = active_density(cfg);
  const double a = cfg.alpha;
  const double rp = config_projection_radius(cfg, dh);
  const double pp = config_projection_probability_rtna(cfg, dh);
  if (pp == 0.0) return 0.0;
  const double rp_hat = std::isinf(rp) ? kInf : std::sqrt(rp * rp + dh * dh);
  const double w2 = omega2(a, 1.0 / cfg.tau);
  const double p_in = std::isinf(rp) ? 1.0 : -std::expm1(-kPi * lam * rp * rp);
  auto f = [&](double r0) {
    const double d2 = r0 * r0 + dh * dh;
    const double s = cfg.tau * std::pow(d2, a / 2.0);
    const double e = kPi * pp * lam_a * (pathloss_disk_integral(a, rp_hat, s) - d2 * w2);
    return r0_pdf(lam, r0) * std::exp(-std::max(e, 0.0));
  };
  const double hi = std::min(rp, r0_cutoff(lam, q));
  const double v = pp * integrate(f, 0.0, hi, q, "cp_rtna_dir r0") / p_in;
  return std::clamp(v, 0.0, 1.0);
}

/// Directional RTNA coverage probability.
inline double cp_rtna_dir(const NetworkConfig& cfg, const QuadratureSpec& q = {}) {
  const QuadratureSpec qi = q.inner();
  return analytic_detail::over_altitude(
      cfg, q, [&](double dh) { return cp_rtna_dir_conditional(cfg, dh, qi); }, "cp_rtna_dir dh");
}

/// Coverage probability for the rule under the configured antenna.
inline double cp_analytic(const NetworkConfig& cfg, AssociationRule rule, const QuadratureSpec& q = {}) {
  if (cfg.omni()) return rule == AssociationRule::rtna ? cp_rtna_omni(cfg) : cp_semi_omni(cfg, q);
  return rule == AssociationRule::rtna ? cp_rtna_dir(cfg, q) : cp_semi_dir(cfg, q);
}

/// CP and ST for the rule under the configured antenna.
inline AnalyticResult evaluate_analytic(const NetworkConfig& cfg, AssociationRule rule, const QuadratureSpec& q = {}) {
  const double lam_a = active_density(cfg);
  return st_from_cp(lam_a, cp_analytic(cfg, rule, q), cfg.tau, backhaul_capacity(cfg, lam_a));
}

struct BeamOptimum {
  double half_beamwidth = kHalfPi;
  double st = 0.0;
};

/// Maximises ST over the half-beamwidth: a log-spaced grid on (0, pi/2]
/// followed by golden-section refinement around the best node.
inline BeamOptimum optimize_beamwidth(const NetworkConfig& cfg, AssociationRule rule, const QuadratureSpec& q = {},
                                      int nodes = 64, double min_beamwidth = 1e-3) {
  if (nodes < 3) throw ValidationError("optimize_beamwidth: at least three grid nodes are required");
  NetworkConfig c = cfg;
  c.pae_c.reset();
  auto st_at = [&](double phi) {
    c.half_beamwidth = std::min(phi, kHalfPi);
    return evaluate_analytic(c, rule, q).st;
  };
  std::vector<double> grid(static_cast<std::size_t>(nodes));
  const double lmin = std::log(min_beamwidth);
  const double lmax = std::log(kHalfPi);
  for (int i = 0; i < nodes; ++i) grid[static_cast<std::size_t>(i)] = std::exp(lmin + (lmax - lmin) * i / (nodes - 1));
  grid.back() = kHalfPi;
  std::size_t best = 0;
  double best_st = -1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = st_at(grid[i]);
    if (v > best_st) {
      best_st = v;
      best = i;
    }
  }
  double lo = grid[best == 0 ? 0 : best - 1];
  double hi = grid[std::min(best + 1, grid.size() - 1)];
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo);
  double x2 = lo + g * (hi - lo);
  double f1 = st_at(x1);
  double f2 = st_at(x2);
  while (hi - lo > 1e-6 * hi) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = st_at(x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = st_at(x1);
    }
  }
  BeamOptimum r{grid[best], best_st};
  const double xm = 0.5 * (lo + hi);
  const double fm = st_at(xm);
  if (fm > r.st) r = {xm, fm};
  return r;
}

struct PaeScaling {
  double p_hat = 0.0;   ///< 1 - exp(-pi C^2)
  double delta1 = 0.0;
  double st_unlimited = 0.0;  ///< lambda_gu * p_hat * delta1 * log2(1 + tau)
  double st_limited = kInf;   ///< p_hat * delta1 * G_m F C_t / (pi R_m^2)
  AnalyticResult result;      ///< large-density limit, min of the two regimes
};

/// Large-density limit of RTNA ST under the projection-area-equivalence policy.
inline PaeScaling st_scaling_pae(const NetworkConfig& cfg) {
  cfg.validate();
  if (!cfg.pae_c) throw ValidationError("st_scaling_pae: pae_c must be set");
  const double c2 = *cfg.pae_c * *cfg.pae_c;
  PaeScaling s;
  s.p_hat = -std::expm1(-kPi * c2);
  const double w = omega2(cfg.alpha, 1.0 / cfg.tau);
  const double den = 1.0 - s.p_hat * w;
  const double num = std::exp(-s.p_hat * kPi * c2 * w) - std::exp(-kPi * c2);
  // den -> 0 is the removable singularity x e^{-pi C^2} with x = pi C^2.
  s.delta1 = std::abs(den) < 1e-12 ? kPi * c2 * std::exp(-kPi * c2) : num / den;
  const double rate = std::log2(1.0 + cfg.tau);
  s.st_unlimited = cfg.lambda_gu * s.p_hat * s.delta1 * rate;
  if (!std::isinf(cfg.backhaul.c_t)) {
    const BackhaulState b = backhaul_state(cfg.backhaul, cfg.hover_radius, cfg.beam_altitude(), 1.0);
    s.st_limited = s.p_hat * s.delta1 * b.g_m * b.f_eff * cfg.backhaul.c_t / (kPi * cfg.backhaul.r_m * cfg.backhaul.r_m);
  }
  s.result.cp = s.p_hat * s.delta1;
  s.result.c_b_used = backhaul_capacity(cfg.backhaul, cfg.hover_radius, cfg.beam_altitude(), cfg.lambda_gu);
  s.result.regime = s.st_limited < s.st_unlimited ? Regime::backhaul_limited : Regime::backhaul_unlimited;
  s.result.st = std::min(s.st_unlimited, s.st_limited);
  return s;
}

}  // namespace uavsg
