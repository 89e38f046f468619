#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

#include "uavsg/error.hpp"

namespace uavsg {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kHalfPi = std::numbers::pi / 2.0;
inline constexpr double kInf = std::numeric_limits<double>::infinity();
/// Mainlobe gain constant of the rectangular antenna pattern.
inline constexpr double kG0 = 2.2846;

using Rng = std::mt19937_64;

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double dist(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Which density thins the interferers in the RTNA projection probability.
enum class ProjectionDensity { active, total };

/// How UAV altitudes are drawn inside one Monte Carlo realization.
enum class AltitudeMode {
  common,       ///< one altitude shared by every UAV of the realization
  independent,  ///< i.i.d. altitude per UAV
};

struct BackhaulConfig {
  double c_t = kInf;
  double r_m = 500.0;
  double eps_bar = 0.1745;
  /// Altitude used for the mmWave beamwidth; NaN selects (h_lower + h_upper) / 2.
  double altitude_for_beam = std::numeric_limits<double>::quiet_NaN();

  bool operator==(const BackhaulConfig& o) const {
    auto same = [](double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); };
    return c_t == o.c_t && r_m == o.r_m && eps_bar == o.eps_bar && same(altitude_for_beam, o.altitude_for_beam);
  }
};

/// Every scalar parameter of the network, SI units (meters, per m^2, watts).
struct NetworkConfig {
  double lambda_uav = 60e-6;
  double lambda_gu = 1e-2;
  double hover_radius = 0.0;
  double h_lower = 91.5;
  double h_upper = 111.5;
  double h_gu = 1.5;
  double alpha = 3.5;
  double tau = 1.0;
  double tx_power = 1.0;
  double half_beamwidth = kHalfPi;
  BackhaulConfig backhaul;
  std::uint64_t seed = 1;
  /// Radius of the simulated disk; 0 selects an automatic radius.
  double sim_region_radius = 0.0;
  /// Projection scaling parameter C; when set the beamwidth follows
  /// arctan(C / (dh sqrt(lambda_a))) for every UAV.
  std::optional<double> pae_c;
  ProjectionDensity rtna_projection_density = ProjectionDensity::active;
  AltitudeMode altitude_mode = AltitudeMode::common;

  double dh_lower() const { return h_lower - h_gu; }
  double dh_upper() const { return h_upper - h_gu; }
  bool omni() const { return !pae_c && half_beamwidth >= kHalfPi; }
  double beam_altitude() const {
    return std::isnan(backhaul.altitude_for_beam) ? 0.5 * (h_lower + h_upper) : backhaul.altitude_for_beam;
  }

  void validate() const {
    auto fail = [](const char* m) { throw ValidationError(m); };
    if (!(lambda_uav > 0.0) || !std::isfinite(lambda_uav)) fail("lambda_uav must be positive");
    if (!(lambda_gu > 0.0) || !std::isfinite(lambda_gu)) fail("lambda_gu must be positive");
    if (!(hover_radius >= 0.0) || !std::isfinite(hover_radius)) fail("hover_radius must be nonnegative");
    if (!(h_gu > 0.0)) fail("h_gu must be positive");
    if (!(h_gu < h_lower)) fail("h_lower must exceed h_gu");
    if (!(h_lower <= h_upper) || !std::isfinite(h_upper)) fail("h_upper must be at least h_lower");
    if (!(alpha > 2.0) || !std::isfinite(alpha)) fail("alpha must exceed 2");
    if (!(tau > 0.0) || !std::isfinite(tau)) fail("tau must be positive");
    if (!(tx_power > 0.0) || !std::isfinite(tx_power)) fail("tx_power must be positive");
    if (!(half_beamwidth > 0.0 && half_beamwidth <= kHalfPi)) fail("half_beamwidth must lie in (0, pi/2]");
    if (!(backhaul.c_t > 0.0)) fail("c_t must be positive");
    if (!(backhaul.r_m > 0.0) || !std::isfinite(backhaul.r_m)) fail("r_m must be positive");
    if (!(backhaul.eps_bar > 0.0) || !std::isfinite(backhaul.eps_bar)) fail("eps_bar must be positive");
    if (!std::isnan(backhaul.altitude_for_beam) && !(backhaul.altitude_for_beam > 0.0))
      fail("altitude_for_beam must be positive");
    if (!(sim_region_radius >= 0.0) || !std::isfinite(sim_region_radius)) fail("sim_region_radius must be nonnegative");
    if (pae_c && !(*pae_c > 0.0 && std::isfinite(*pae_c))) fail("pae_c must be positive");
  }

  bool operator==(const NetworkConfig&) const = default;
};

struct UavState {
  Point2 hover_center;
  double altitude = 0.0;
  double hover_angle = 0.0;
  bool activated = false;
  std::optional<std::size_t> served_gu;

  Point2 position(double hover_radius) const {
    return {hover_center.x + hover_radius * std::cos(hover_angle),
            hover_center.y + hover_radius * std::sin(hover_angle)};
  }
};

struct GroundUser {
  Point2 position;
  std::optional<std::size_t> associated_uav;
  bool in_projection = false;
};

/// Uniform point on the disk of the given radius centred at the origin.
inline Point2 uniform_in_disk(double radius, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = radius * std::sqrt(u(rng));
  const double a = 2.0 * kPi * u(rng);
  return {r * std::cos(a), r * std::sin(a)};
}

/// Homogeneous Poisson point process on a disk centred at the origin.
inline std::vector<Point2> sample_ppp(double density, double region_radius, Rng& rng) {
  if (!(density >= 0.0) || !(region_radius > 0.0)) throw ValidationError("sample_ppp: invalid density or radius");
  std::vector<Point2> pts;
  if (density == 0.0) return pts;
  std::poisson_distribution<long long> count(density * kPi * region_radius * region_radius);
  const long long n = count(rng);
  pts.reserve(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) pts.push_back(uniform_in_disk(region_radius, rng));
  return pts;
}

/// Hover centers from the UAV process on a disk; altitudes uniform in
/// [h_lower, h_upper] and hover angles uniform in [0, 2 pi).
inline std::vector<UavState> sample_uav_field(const NetworkConfig& cfg, double region_radius, Rng& rng) {
  std::uniform_real_distribution<double> alt(cfg.h_lower, cfg.h_upper);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
  std::vector<UavState> uavs;
  for (const Point2& c : sample_ppp(cfg.lambda_uav, region_radius, rng)) {
    UavState s;
    s.hover_center = c;
    s.altitude = cfg.h_lower == cfg.h_upper ? cfg.h_lower : alt(rng);
    s.hover_angle = ang(rng);
    uavs.push_back(s);
  }
  return uavs;
}

/// Rectangular-mainlobe antenna gain G0 / Phi^2. The omni setting Phi = pi/2
/// is normalised to unit gain.
inline double antenna_gain(double phi, double varphi, double half_beamwidth) {
  if (!(half_beamwidth > 0.0 && half_beamwidth <= kHalfPi))
    throw ValidationError("antenna_gain: half_beamwidth must lie in (0, pi/2]");
  if (std::abs(phi) > half_beamwidth || std::abs(varphi) > half_beamwidth) return 0.0;
  if (half_beamwidth == kHalfPi) return 1.0;
  return kG0 / (half_beamwidth * half_beamwidth);
}

/// Ground footprint radius of the mainlobe; +inf at Phi = pi/2.
inline double projection_radius(double delta_h, double half_beamwidth) {
  if (!(half_beamwidth > 0.0 && half_beamwidth <= kHalfPi))
    throw ValidationError("projection_radius: half_beamwidth must lie in (0, pi/2]");
  if (half_beamwidth >= kHalfPi) return kInf;
  return delta_h * std::tan(half_beamwidth);
}

/// Received power factor fading * d^-alpha.
inline double channel_power(double distance, double alpha, double fading) {
  if (distance == 0.0) throw DegenerateGeometry("channel_power: zero link distance");
  return fading * std::pow(distance, -alpha);
}

/// Unit-mean exponential fading power draw.
inline double sample_fading(Rng& rng) { return std::exponential_distribution<double>(1.0)(rng); }

}  // namespace uavsg
