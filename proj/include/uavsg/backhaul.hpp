#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "uavsg/error.hpp"
#include "uavsg/model.hpp"

namespace uavsg {

struct BackhaulState {
  double theta_beam = 0.0;
  double g_m = 0.0;
  double f_eff = 0.0;
  double c_b = 0.0;
};

/// Smallest mmWave beamwidth used when the hover radius vanishes.
inline constexpr double kMinBeamwidth = 1e-4;

/// mmWave beamwidth 2 arctan(R_h / h) covering the hover circle.
/// Returns 0 when the hover radius is 0.
inline double mmwave_beamwidth(double hover_radius, double altitude) {
  if (!(altitude > 0.0) || !(hover_radius >= 0.0)) throw ValidationError("mmwave_beamwidth: invalid geometry");
  if (hover_radius == 0.0) return 0.0;
  const double t = 2.0 * std::atan(hover_radius / altitude);
  if (!(t < kHalfPi)) throw BeamDomain("mmwave_beamwidth: beamwidth must be below pi/2");
  return t;
}

inline void check_beam(double theta_beam, const char* what) {
  if (!(theta_beam > 0.0 && theta_beam < kHalfPi)) throw BeamDomain(std::string(what) + ": beamwidth outside (0, pi/2)");
}

/// mmWave mainlobe gain 2 pi / theta.
inline double mainlobe_gain(double theta_beam) {
  check_beam(theta_beam, "mainlobe_gain");
  return 2.0 * kPi / theta_beam;
}

/// Probability that a truncated-exponential orientation error on [0, pi]
/// with parameter eps_bar stays within half the beamwidth.
inline double effective_function(double theta_beam, double eps_bar) {
  check_beam(theta_beam, "effective_function");
  if (!(eps_bar > 0.0)) throw ValidationError("effective_function: eps_bar must be positive");
  return std::expm1(-theta_beam / (2.0 * eps_bar)) / std::expm1(-kPi / eps_bar);
}

/// Density of the truncated-exponential orientation error magnitude.
inline double orientation_error_pdf(double e, double eps_bar) {
  if (e < 0.0 || e > kPi) return 0.0;
  return std::exp(-e / eps_bar) / (eps_bar * -std::expm1(-kPi / eps_bar));
}

/// Per-UAV backhaul capacity G_m F C_t / (lambda_a pi R_m^2).
inline BackhaulState backhaul_state(const BackhaulConfig& cfg, double hover_radius, double beam_altitude,
                                    double lambda_active) {
  BackhaulState s;
  if (std::isinf(cfg.c_t)) {
    s.c_b = kInf;
    return s;
  }
  s.theta_beam = std::max(mmwave_beamwidth(hover_radius, beam_altitude), kMinBeamwidth);
  s.g_m = mainlobe_gain(s.theta_beam);
  s.f_eff = effective_function(s.theta_beam, cfg.eps_bar);
  if (!(lambda_active > 0.0))
    s.c_b = kInf;
  else
    s.c_b = s.g_m * s.f_eff * cfg.c_t / (lambda_active * kPi * cfg.r_m * cfg.r_m);
  return s;
}

inline double backhaul_capacity(const BackhaulConfig& cfg, double hover_radius, double beam_altitude,
                                double lambda_active) {
  return backhaul_state(cfg, hover_radius, beam_altitude, lambda_active).c_b;
}

inline double backhaul_capacity(const NetworkConfig& cfg, double lambda_active) {
  return backhaul_capacity(cfg.backhaul, cfg.hover_radius, cfg.beam_altitude(), lambda_active);
}

}  // namespace uavsg
