#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "uavsg/analytic.hpp"
#include "uavsg/config_io.hpp"
#include "uavsg/csv.hpp"
#include "uavsg/montecarlo.hpp"
#include "uavsg/sweep.hpp"

namespace uavsg {

inline const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids{"2a", "2b", "3a", "3b", "4a", "4b", "5"};
  return ids;
}

/// Baseline of every figure: P = 30 dBm, altitude difference U(90, 110) m,
/// tau = 1, alpha = 3.5, 1e4 users per km^2, R_m = 500 m.
inline NetworkConfig figure_baseline() {
  NetworkConfig c;
  c.tx_power = dbm_to_watts(30.0);
  c.h_gu = 1.5;
  c.h_lower = c.h_gu + 90.0;
  c.h_upper = c.h_gu + 110.0;
  c.tau = 1.0;
  c.alpha = 3.5;
  c.lambda_gu = 1e4 / 1e6;
  c.backhaul.r_m = 500.0;
  c.hover_radius = 50.0;
  return c;
}

struct FigureOptions {
  long long n_trials = 20000;
  Engines engines;
  McOptions mc;
};

namespace figure_detail {

struct Cells {
  double cp_a = std::nan(""), st_a = std::nan("");
  double cp_m = std::nan(""), cp_se = std::nan(""), st_m = std::nan(""), st_se = std::nan("");
  std::string error;
};

// One MC run per configuration, re-scored for each backhaul capacity.
inline std::vector<Cells> evaluate_cts(const NetworkConfig& base, AssociationRule rule, const std::vector<double>& cts,
                                       const FigureOptions& o) {
  std::vector<Cells> out(cts.size());
  Engines mc_only{false, o.engines.mc};
  PointResult mc;
  if (o.engines.mc) mc = evaluate_point(base, rule, mc_only, o.n_trials, std::nullopt, o.mc);
  for (std::size_t k = 0; k < cts.size(); ++k) {
    NetworkConfig c = base;
    c.backhaul.c_t = cts[k];
    Cells& x = out[k];
    x.error = mc.error;
    if (o.engines.analytic) {
      const PointResult a = evaluate_point(c, rule, {true, false}, o.n_trials, std::nullopt, o.mc);
      x.cp_a = a.cp_analytic;
      x.st_a = a.st_analytic;
      if (!a.error.empty()) x.error += (x.error.empty() ? "" : "; ") + a.error;
    }
    if (mc.mc) {
      McEstimate e = *mc.mc;
      apply_backhaul(e, c);
      x.cp_m = e.cp.value;
      x.cp_se = e.cp.std_error;
      x.st_m = e.st.value;
      x.st_se = e.st.std_error;
    }
  }
  return out;
}

inline std::string km2(double per_m2) { return format_real(per_m2 * 1e6); }

}  // namespace figure_detail

/// Emits the data behind one figure. Axis grids are fixed per figure; the
/// remaining parameters come from base.
inline Table reproduce_figure(const std::string& id, const NetworkConfig& base, const FigureOptions& o = {}) {
  using figure_detail::Cells;
  using figure_detail::evaluate_cts;
  using figure_detail::km2;
  base.validate();
  Table t;
  add_run_meta(t, "reproduce-figure " + id, base);
  t.add_meta("trials", std::to_string(o.n_trials));
  t.add_meta("engine", to_string(o.engines));
  const std::vector<AssociationRule> rules{AssociationRule::semi, AssociationRule::rtna};
  const double inf = kInf;

  if (id == "2a" || id == "2b") {
    const bool st = id == "2b";
    t.columns = {"lambda_per_km2", "hover_radius", "rule"};
    if (st) t.columns.push_back("ct");
    for (const char* c : st ? std::vector<const char*>{"st_analytic", "st_mc", "st_mc_se"}
                            : std::vector<const char*>{"cp_analytic", "cp_mc", "cp_mc_se"})
      t.columns.push_back(c);
    t.columns.push_back("error");
    const std::vector<double> cts = st ? std::vector<double>{10.0, inf} : std::vector<double>{base.backhaul.c_t};
    for (double lam : {20.0, 60.0, 100.0})
      for (double rh : {0.0, 25.0, 50.0, 75.0, 100.0, 125.0, 150.0, 175.0, 200.0})
        for (AssociationRule rule : rules) {
          NetworkConfig c = base;
          c.lambda_uav = lam / 1e6;
          c.hover_radius = rh;
          c.half_beamwidth = kHalfPi;
          c.pae_c.reset();
          const auto cells = evaluate_cts(c, rule, cts, o);
          for (std::size_t k = 0; k < cts.size(); ++k) {
            const Cells& x = cells[k];
            std::vector<std::string> row{km2(c.lambda_uav), format_real(rh), to_string(rule)};
            if (st) row.push_back(format_real(cts[k]));
            if (st) {
              row.insert(row.end(), {cell(x.st_a), cell(x.st_m), cell(x.st_se)});
            } else {
              row.insert(row.end(), {cell(x.cp_a), cell(x.cp_m), cell(x.cp_se)});
            }
            row.push_back(x.error);
            t.add_row(std::move(row));
          }
        }
    return t;
  }

  if (id == "3a" || id == "3b") {
    const bool st = id == "3b";
    t.columns = {"lambda_per_km2", "hover_radius", "rule"};
    if (st) t.columns.push_back("ct");
    for (const char* c : st ? std::vector<const char*>{"st_analytic", "st_mc", "st_mc_se"}
                            : std::vector<const char*>{"cp_analytic", "cp_mc", "cp_mc_se"})
      t.columns.push_back(c);
    t.columns.push_back("error");
    const std::vector<double> cts = st ? std::vector<double>{10.0, inf} : std::vector<double>{base.backhaul.c_t};
    for (double rh : {50.0, 100.0})
      for (AssociationRule rule : rules)
        for (double lam : {10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0, 90.0, 100.0}) {
          NetworkConfig c = base;
          c.lambda_uav = lam / 1e6;
          c.hover_radius = rh;
          c.half_beamwidth = kHalfPi;
          c.pae_c.reset();
          const auto cells = evaluate_cts(c, rule, cts, o);
          for (std::size_t k = 0; k < cts.size(); ++k) {
            const Cells& x = cells[k];
            std::vector<std::string> row{km2(c.lambda_uav), format_real(rh), to_string(rule)};
            if (st) {
              row.push_back(format_real(cts[k]));
              row.insert(row.end(), {cell(x.st_a), cell(x.st_m), cell(x.st_se)});
            } else {
              row.insert(row.end(), {cell(x.cp_a), cell(x.cp_m), cell(x.cp_se)});
            }
            row.push_back(x.error);
            t.add_row(std::move(row));
          }
        }
    return t;
  }

  if (id == "4a" || id == "4b") {
    const bool vs_phi = id == "4a";
    t.columns = {"lambda_per_km2", "half_beamwidth_deg", "rule", "st_analytic", "st_mc", "st_mc_se",
                 "cp_analytic",    "cp_mc",              "cp_mc_se", "error"};
    std::vector<double> lams, phis;
    if (vs_phi) {
      lams = {20.0, 40.0, 80.0};
      for (int d = 5; d <= 90; d += 5) phis.push_back(d);
    } else {
      lams = {10.0, 20.0, 40.0, 60.0, 80.0, 100.0, 150.0, 200.0};
      phis = {15.0, 30.0, 60.0};
    }
    for (double lam : lams)
      for (double deg : phis)
        for (AssociationRule rule : rules) {
          NetworkConfig c = base;
          c.lambda_uav = lam / 1e6;
          c.half_beamwidth = deg == 90.0 ? kHalfPi : deg * kPi / 180.0;
          c.pae_c.reset();
          c.backhaul.c_t = 10.0;
          const Cells x = evaluate_cts(c, rule, {10.0}, o)[0];
          t.add_row({km2(c.lambda_uav), format_real(deg), to_string(rule), cell(x.st_a), cell(x.st_m), cell(x.st_se),
                     cell(x.cp_a), cell(x.cp_m), cell(x.cp_se), x.error});
        }
    return t;
  }

  if (id == "5") {
    t.columns = {"lambda_per_km2", "ct", "st_analytic", "st_mc", "st_mc_se", "dh_low_m", "dh_high_m", "st_limit", "error"};
    const std::vector<double> cts{10.0, 100.0, inf};
    const std::vector<std::pair<double, double>> bands{{90.0, 110.0}, {190.0, 210.0}};
    const std::vector<double> lams{10, 20, 30, 40, 50, 60, 80, 100, 120, 140, 160, 180, 200};
    for (const auto& [lo, hi] : bands)
      for (double lam : lams) {
        NetworkConfig c = base;
        c.lambda_uav = lam / 1e6;
        c.h_lower = c.h_gu + lo;
        c.h_upper = c.h_gu + hi;
        c.pae_c = c.pae_c ? *c.pae_c : 1.0;
        const auto cells = evaluate_cts(c, AssociationRule::rtna, cts, o);
        for (std::size_t k = 0; k < cts.size(); ++k) {
          NetworkConfig ck = c;
          ck.backhaul.c_t = cts[k];
          const double limit = st_scaling_pae(ck).result.st;
          const Cells& x = cells[k];
          t.add_row({km2(c.lambda_uav), format_real(cts[k]), cell(x.st_a), cell(x.st_m), cell(x.st_se), format_real(lo),
                     format_real(hi), cell(limit), x.error});
        }
      }
    return t;
  }

  throw ValidationError("unknown figure '" + id + "' (expected 2a, 2b, 3a, 3b, 4a, 4b or 5)");
}

}  // namespace uavsg
