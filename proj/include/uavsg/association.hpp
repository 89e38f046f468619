#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "uavsg/error.hpp"
#include "uavsg/model.hpp"
#include "uavsg/quadrature.hpp"

namespace uavsg {

enum class AssociationRule {
  rtna,  ///< nearest instantaneous UAV position
  semi,  ///< nearest hover center
};

inline const char* to_string(AssociationRule r) { return r == AssociationRule::rtna ? "rtna" : "semi"; }

inline AssociationRule parse_rule(const std::string& s) {
  if (s == "rtna") return AssociationRule::rtna;
  if (s == "semi" || s == "semi-rtna") return AssociationRule::semi;
  throw ParseError("unknown association rule '" + s + "'");
}

/// Horizontal location a rule measures distances to.
inline Point2 anchor(const UavState& u, AssociationRule rule, double hover_radius) {
  return rule == AssociationRule::rtna ? u.position(hover_radius) : u.hover_center;
}

/// Index of the UAV nearest to p under the rule; ties go to the lowest index.
inline std::optional<std::size_t> nearest_uav(Point2 p, const std::vector<UavState>& uavs, AssociationRule rule,
                                              double hover_radius) {
  std::optional<std::size_t> best;
  double best_d2 = kInf;
  for (std::size_t i = 0; i < uavs.size(); ++i) {
    const Point2 a = anchor(uavs[i], rule, hover_radius);
    const double d2 = (a.x - p.x) * (a.x - p.x) + (a.y - p.y) * (a.y - p.y);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  return best;
}

/// Serving UAV for every ground user.
inline std::vector<std::optional<std::size_t>> associate(std::vector<GroundUser>& gus, const std::vector<UavState>& uavs,
                                                         AssociationRule rule, double hover_radius) {
  std::vector<std::optional<std::size_t>> map(gus.size());
  for (std::size_t j = 0; j < gus.size(); ++j) {
    map[j] = nearest_uav(gus[j].position, uavs, rule, hover_radius);
    gus[j].associated_uav = map[j];
  }
  return map;
}

/// Marks each UAV active iff at least one user is associated with it and
/// returns the activated fraction.
inline double mark_activation(std::vector<UavState>& uavs, const std::vector<std::optional<std::size_t>>& map) {
  for (auto& u : uavs) {
    u.activated = false;
    u.served_gu.reset();
  }
  for (std::size_t j = 0; j < map.size(); ++j) {
    if (!map[j]) continue;
    UavState& u = uavs[*map[j]];
    if (!u.activated) u.served_gu = j;
    u.activated = true;
  }
  if (uavs.empty()) return 0.0;
  const auto active = std::count_if(uavs.begin(), uavs.end(), [](const UavState& u) { return u.activated; });
  return static_cast<double>(active) / static_cast<double>(uavs.size());
}

/// Probability that a UAV has at least one associated user, for the
/// density ratio eta = lambda / lambda_gu.
inline double activation_probability(double eta) {
  if (!(eta > 0.0)) throw ValidationError("activation_probability: eta must be positive");
  constexpr double mu = 3.5;
  return -std::expm1(-mu * std::log1p(1.0 / (mu * eta)));
}

/// Activated UAV density q_a * lambda.
inline double active_density(const NetworkConfig& cfg) {
  return activation_probability(cfg.lambda_uav / cfg.lambda_gu) * cfg.lambda_uav;
}

/// Fraction of hover angles for which a UAV with hover center at distance r0
/// has its instantaneous position within proj_radius of the origin.
inline double projection_angle_fraction(double r0, double hover_radius, double proj_radius) {
  if (hover_radius == 0.0 || r0 == 0.0) return r0 < proj_radius ? 1.0 : 0.0;
  const double c = (r0 * r0 + hover_radius * hover_radius - proj_radius * proj_radius) / (2.0 * r0 * hover_radius);
  if (c <= -1.0) return 1.0;
  if (c >= 1.0) return 0.0;
  return std::acos(c) / kPi;
}

/// Probability that the user lies inside the projection disk of the UAV
/// whose hover center is nearest.
inline double projection_probability_semi(double lambda_uav, double hover_radius, double proj_radius,
                                          const QuadratureSpec& q = {}) {
  if (!(lambda_uav >= 0.0) || !(hover_radius >= 0.0) || !(proj_radius >= 0.0))
    throw ValidationError("projection_probability_semi: arguments must be nonnegative");
  if (std::isinf(proj_radius)) return 1.0;
  if (proj_radius == 0.0 || lambda_uav == 0.0) return 0.0;
  const double inner = std::max(0.0, proj_radius - hover_radius);
  const double full = -std::expm1(-kPi * lambda_uav * inner * inner);
  const double lo = std::abs(hover_radius - proj_radius);
  const double hi = hover_radius + proj_radius;
  if (hover_radius == 0.0) return full;
  auto f = [&](double r) {
    return 2.0 * kPi * lambda_uav * r * std::exp(-kPi * lambda_uav * r * r) *
           projection_angle_fraction(r, hover_radius, proj_radius);
  };
  const double part = integrate_sqrt_ends(f, lo, hi, q, "projection_probability_semi");
  return std::clamp(full + part, 0.0, 1.0);
}

/// RTNA projection probability 1 - exp(-pi lambda R_p^2).
inline double projection_probability_rtna(double lambda_active, double proj_radius) {
  if (!(lambda_active >= 0.0) || !(proj_radius >= 0.0))
    throw ValidationError("projection_probability_rtna: arguments must be nonnegative");
  if (std::isinf(proj_radius)) return lambda_active > 0.0 ? 1.0 : 0.0;
  return -std::expm1(-kPi * lambda_active * proj_radius * proj_radius);
}

}  // namespace uavsg
